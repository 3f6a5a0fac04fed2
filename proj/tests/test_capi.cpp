#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "plab.h"

using nlohmann::json;

TEST_CASE("run lifecycle over the C API") {
    plab_run* run = nullptr;
    REQUIRE(plab_run_new(R"({"n":2,"m":1,"k":1,"l":1,"samples":5,"suites":["commutators","oracle"]})",
                         &run) == PLAB_OK);
    REQUIRE(run != nullptr);

    // not executed yet
    CHECK(plab_run_failure_count(run) == -1);
    CHECK(plab_run_report_json(run) == nullptr);

    CHECK(plab_run_execute(run) == PLAB_OK);
    CHECK(plab_run_failure_count(run) == 0);

    const char* rj = plab_run_report_json(run);
    REQUIRE(rj != nullptr);
    json parsed = json::parse(rj);
    CHECK(parsed.at("status") == "pass");

    const char* rt = plab_run_report_text(run);
    REQUIRE(rt != nullptr);
    CHECK(std::string(rt).find("ALL CHECKS PASSED") != std::string::npos);

    const char* cfg = plab_run_config_json(run);
    REQUIRE(cfg != nullptr);
    CHECK(json::parse(cfg).at("tuples").size() == 1);

    // executing again is a no-op
    CHECK(plab_run_execute(run) == PLAB_OK);
    plab_run_free(run);
}

TEST_CASE("error contract") {
    plab_run* run = nullptr;
    CHECK(plab_run_new(nullptr, &run) == PLAB_ERR_INVALID_ARGUMENT);
    CHECK(plab_run_new("{", &run) == PLAB_ERR_BAD_CONFIG);
    CHECK(std::strlen(plab_last_error()) > 0);
    CHECK(plab_run_new(R"({"n":2,"m":1,"k":1,"l":5})", &run) == PLAB_ERR_BAD_CONFIG);
    CHECK(plab_run_execute(nullptr) == PLAB_ERR_INVALID_ARGUMENT);
    CHECK(plab_run_failure_count(nullptr) == -1);
    plab_run_free(nullptr);  // must be a safe no-op
}

TEST_CASE("schema and dims endpoints") {
    const char* sj = plab_report_schema_json();
    REQUIRE(sj != nullptr);
    CHECK(json::parse(sj).contains("properties"));
    REQUIRE(plab_report_schema_text() != nullptr);

    char* out = nullptr;
    REQUIRE(plab_dims_json(R"({"n":3,"m":2,"k":2,"l":2})", &out) == PLAB_OK);
    REQUIRE(out != nullptr);
    json dims = json::parse(out);
    CHECK(dims.at("d") == 1);
    plab_string_free(out);

    CHECK(plab_dims_json(R"({"grid":{"nmax":3}})", &out) == PLAB_ERR_BAD_CONFIG);
    CHECK(plab_dims_text(R"({"n":3,"m":2,"k":2,"l":2})", &out) == PLAB_OK);
    plab_string_free(out);
}

TEST_CASE("identical configs give byte-identical reports") {
    const char* config =
        R"({"tuples":[[2,1,1,1],[3,1,1,2]],"seed":99,"samples":4,"suites":["pasting"]})";
    std::string first, second;
    for (int i = 0; i < 2; ++i) {
        plab_run* run = nullptr;
        REQUIRE(plab_run_new(config, &run) == PLAB_OK);
        REQUIRE(plab_run_execute(run) == PLAB_OK);
        (i == 0 ? first : second) = plab_run_report_json(run);
        plab_run_free(run);
    }
    CHECK(first == second);
    CHECK(plab_version() != nullptr);
}

#include "plab.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "plab/suites.hpp"

using plab::suites::ConfigError;
using plab::suites::Report;
using plab::suites::RunConfig;

struct plab_run {
    RunConfig config;
    std::string config_json;
    std::optional<Report> report;
    std::string report_json;
    std::string report_text;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

plab_status parse_single_frame(const char* config_json, plab::Frame& out) {
    if (!config_json) {
        set_error("config_json is null");
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    try {
        RunConfig cfg = plab::suites::config_from_json(config_json);
        if (cfg.tuples.size() != 1) {
            set_error("expected a single tuple");
            return PLAB_ERR_BAD_CONFIG;
        }
        out = plab::Frame(cfg.tuples[0][0], cfg.tuples[0][1], cfg.tuples[0][2], cfg.tuples[0][3]);
        return PLAB_OK;
    } catch (const ConfigError& e) {
        set_error(e.what());
        return PLAB_ERR_BAD_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PLAB_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

plab_status plab_run_new(const char* config_json, plab_run** out_run) {
    if (!config_json || !out_run) {
        set_error("null argument");
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out_run = nullptr;
    try {
        RunConfig cfg = plab::suites::config_from_json(config_json);
        auto* run = new plab_run;
        run->config = std::move(cfg);
        run->config_json = plab::suites::config_to_json(run->config).dump(2);
        *out_run = run;
        return PLAB_OK;
    } catch (const ConfigError& e) {
        set_error(e.what());
        return PLAB_ERR_BAD_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PLAB_ERR_INTERNAL;
    }
}

plab_status plab_run_execute(plab_run* run) {
    if (!run) {
        set_error("run is null");
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    if (run->report) return PLAB_OK;
    try {
        run->report = plab::suites::run(run->config);
        run->report_json = plab::suites::report_to_json(*run->report).dump(2) + "\n";
        run->report_text = plab::suites::report_to_text(*run->report);
        return PLAB_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        run->report.reset();
        return PLAB_ERR_INTERNAL;
    }
}

long long plab_run_failure_count(const plab_run* run) {
    if (!run || !run->report) return -1;
    return static_cast<long long>(run->report->failure_count);
}

const char* plab_run_report_json(plab_run* run) {
    if (!run || !run->report) return nullptr;
    return run->report_json.c_str();
}

const char* plab_run_report_text(plab_run* run) {
    if (!run || !run->report) return nullptr;
    return run->report_text.c_str();
}

const char* plab_run_config_json(const plab_run* run) {
    if (!run) return nullptr;
    return run->config_json.c_str();
}

void plab_run_free(plab_run* run) { delete run; }

const char* plab_report_schema_json(void) {
    static const std::string schema = plab::suites::report_schema_json();
    return schema.c_str();
}

const char* plab_report_schema_text(void) {
    static const std::string schema = plab::suites::report_schema_text();
    return schema.c_str();
}

plab_status plab_dims_json(const char* config_json, char** out) {
    if (!out) {
        set_error("out is null");
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    plab::Frame fr;
    plab_status rc = parse_single_frame(config_json, fr);
    if (rc != PLAB_OK) return rc;
    *out = dup_string(plab::suites::dims_json(fr).dump(2) + "\n");
    return *out ? PLAB_OK : PLAB_ERR_INTERNAL;
}

plab_status plab_dims_text(const char* config_json, char** out) {
    if (!out) {
        set_error("out is null");
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    plab::Frame fr;
    plab_status rc = parse_single_frame(config_json, fr);
    if (rc != PLAB_OK) return rc;
    *out = dup_string(plab::suites::dims_text(fr));
    return *out ? PLAB_OK : PLAB_ERR_INTERNAL;
}

void plab_string_free(char* s) { delete[] s; }

const char* plab_last_error(void) { return g_last_error.c_str(); }

const char* plab_version(void) { return "prolongation-lab 1.0.0"; }

}  // extern "C"

// plab: CLI front end over the prolongation-lab C API.
//
// Subcommands:
//   verify  run verification suites on one tuple or a parameter grid
//   schema  print the stable report schema
//   dims    print the dimension table of the tower levels for one tuple
//
// Exit codes: 0 pass, 1 verification failure, 2 usage/config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plab.h"

using nlohmann::json;

namespace {

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

bool parse_grid(const std::string& text, json& out) {
    // "nmax=3,mmax=2,kmax=2"
    json grid = json::object();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) return false;
        std::string key = item.substr(0, eq);
        if (key != "nmax" && key != "mmax" && key != "kmax") return false;
        try {
            grid[key] = static_cast<uint32_t>(std::stoul(item.substr(eq + 1)));
        } catch (...) {
            return false;
        }
    }
    out = grid;
    return true;
}

struct VerifyOptions {
    uint32_t n = 0, m = 0, k = 0, l = 0;
    uint64_t seed = 0;
    bool seed_set = false;
    uint32_t samples = 0;
    uint32_t threads = 0;
    std::vector<std::string> suites;
    std::string grid;
    std::string json_path;
    std::string format = "text";
    std::string config_path;
};

int run_verify(const VerifyOptions& opt) {
    // precedence: flags > config file > defaults
    json config = json::object();
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) return usage_error("cannot open config file: " + opt.config_path);
        try {
            in >> config;
        } catch (const std::exception& e) {
            return usage_error(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!config.is_object()) return usage_error("config file must hold a JSON object");
    }
    if (!opt.grid.empty()) {
        json grid;
        if (!parse_grid(opt.grid, grid)) return usage_error("bad --grid, expected nmax=..,mmax=..,kmax=..");
        config["grid"] = grid;
        config.erase("n");
        config.erase("m");
        config.erase("k");
        config.erase("l");
        config.erase("tuples");
    } else if (opt.n || opt.m || opt.k || opt.l) {
        if (!(opt.n && opt.m && opt.k && opt.l))
            return usage_error("--n, --m, --k and --l must be given together");
        config["n"] = opt.n;
        config["m"] = opt.m;
        config["k"] = opt.k;
        config["l"] = opt.l;
        config.erase("grid");
        config.erase("tuples");
    }
    if (opt.seed_set) config["seed"] = opt.seed;
    if (opt.samples) config["samples"] = opt.samples;
    if (opt.threads) config["threads"] = opt.threads;
    if (!opt.suites.empty()) {
        json suites = json::array();
        for (const auto& s : opt.suites) {
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) suites.push_back(item);
            }
        }
        config["suites"] = suites;
    }

    plab_run* run = nullptr;
    if (plab_run_new(config.dump().c_str(), &run) != PLAB_OK) {
        return usage_error(plab_last_error());
    }
    if (plab_run_execute(run) != PLAB_OK) {
        std::string msg = plab_last_error();
        plab_run_free(run);
        std::cerr << "internal error: " << msg << "\n";
        return 2;
    }
    if (!opt.json_path.empty()) {
        std::ofstream out(opt.json_path);
        if (!out) {
            plab_run_free(run);
            return usage_error("cannot write " + opt.json_path);
        }
        out << plab_run_report_json(run);
    }
    if (opt.format == "json") {
        std::cout << plab_run_report_json(run);
    } else {
        std::cout << plab_run_report_text(run);
    }
    long long failures = plab_run_failure_count(run);
    plab_run_free(run);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prolongation-lab: exact verification of the prolongation tower over "
                 "Grassmannians of jet-space integral elements"};
    app.require_subcommand(1);

    VerifyOptions vopt;
    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--n", vopt.n, "number of independent directions (n >= 2)");
    verify->add_option("--m", vopt.m, "number of dependent directions (m >= 1)");
    verify->add_option("--k", vopt.k, "jet order (k >= 1)");
    verify->add_option("--l", vopt.l, "integral element dimension (1 <= l < n)");
    verify->add_option("--seed", vopt.seed, "random seed")->each([&](const std::string&) {
        vopt.seed_set = true;
    });
    verify->add_option("--samples", vopt.samples, "sample count per randomized claim");
    verify->add_option("--threads", vopt.threads,
                       "worker threads (default: PROLONGATION_LAB_THREADS or hardware)");
    verify->add_option("--suite", vopt.suites,
                       "suites to run (commutators|oracle|pasting|polar|prolongation|"
                       "stabilization|all), repeatable or comma separated");
    verify->add_option("--grid", vopt.grid, "parameter grid, e.g. nmax=3,mmax=2,kmax=2");
    verify->add_option("--json", vopt.json_path, "write the JSON report to a file");
    verify->add_option("--format", vopt.format, "stdout format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--config", vopt.config_path, "JSON config file (flags take precedence)");

    std::string schema_format = "json";
    CLI::App* schema = app.add_subcommand("schema", "print the report schema");
    schema->add_option("--format", schema_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    uint32_t dn = 0, dm = 0, dk = 0, dl = 0;
    std::string dims_format = "text";
    CLI::App* dims = app.add_subcommand("dims", "print the tower dimension table");
    dims->add_option("--n", dn, "number of independent directions")->required();
    dims->add_option("--m", dm, "number of dependent directions")->required();
    dims->add_option("--k", dk, "jet order")->required();
    dims->add_option("--l", dl, "integral element dimension")->required();
    dims->add_option("--format", dims_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (verify->parsed()) return run_verify(vopt);

    if (schema->parsed()) {
        std::cout << (schema_format == "text" ? plab_report_schema_text()
                                              : plab_report_schema_json());
        return 0;
    }

    if (dims->parsed()) {
        json config{{"n", dn}, {"m", dm}, {"k", dk}, {"l", dl}};
        char* out = nullptr;
        plab_status rc = dims_format == "json" ? plab_dims_json(config.dump().c_str(), &out)
                                               : plab_dims_text(config.dump().c_str(), &out);
        if (rc != PLAB_OK) return usage_error(plab_last_error());
        std::cout << out;
        plab_string_free(out);
        return 0;
    }
    return 2;
}

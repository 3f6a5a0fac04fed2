#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "plab/sympoly.hpp"

namespace plab::suites {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<std::array<uint32_t, 4>> tuples;  // (n, m, k, l)
    uint64_t seed = 42;
    uint32_t samples = 100;
    std::vector<std::string> suites;  // sorted unique suite names
    uint32_t threads = 0;             // 0: env var / hardware default
};

/// The available suite names, sorted.
const std::vector<std::string>& suite_names();

/// Parses and validates a configuration. Accepts either explicit
/// {"tuples": [[n,m,k,l],...]}, a {"grid": {"nmax","mmax","kmax"}} product
/// (l runs over 1..n-1), or single {"n","m","k","l"} fields; "suites" may be
/// ["all"]. Throws ConfigError with a message on any invalid input.
RunConfig config_from_json(const std::string& text);
nlohmann::json config_to_json(const RunConfig& config);

struct ClaimResult {
    std::string claim;
    nlohmann::json parameters;
    uint64_t samples = 0;
    nlohmann::json failures = nlohmann::json::array();

    bool pass() const { return failures.empty(); }
};

struct SuiteResult {
    std::string suite;
    uint32_t n = 0, m = 0, k = 0, l = 0;
    std::vector<ClaimResult> claims;
};

struct Report {
    RunConfig config;
    std::vector<SuiteResult> results;
    uint64_t failure_count = 0;

    bool pass() const { return failure_count == 0; }
};

/// Executes the selected suites over every tuple; tasks run in parallel up to
/// the thread cap, each on a seed derived from (config.seed, suite, tuple),
/// so reports are byte-identical across runs and thread counts.
Report run(const RunConfig& config);

nlohmann::json report_to_json(const Report& report);
std::string report_to_text(const Report& report);

/// The stable schema of the JSON report.
std::string report_schema_json();
std::string report_schema_text();

/// Closed-form dimension table of the tower levels for one tuple.
nlohmann::json dims_json(const Frame& frame);
std::string dims_text(const Frame& frame);

// per-suite entry points (used by the acceptance harness as well)
std::vector<ClaimResult> run_commutators(const Frame& frame, uint64_t seed, uint32_t samples);
std::vector<ClaimResult> run_oracle(const Frame& frame, uint64_t seed, uint32_t samples);
std::vector<ClaimResult> run_prolongation(const Frame& frame, uint64_t seed, uint32_t samples);
std::vector<ClaimResult> run_polar(const Frame& frame, uint64_t seed, uint32_t samples);
std::vector<ClaimResult> run_pasting(const Frame& frame, uint64_t seed, uint32_t samples);
std::vector<ClaimResult> run_stabilization(const Frame& frame, uint64_t seed, uint32_t samples);

}  // namespace plab::suites

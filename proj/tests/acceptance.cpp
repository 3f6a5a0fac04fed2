// Acceptance harness: every top-level correctness criterion at its stated
// size, fixed seed, exact arithmetic (zero tolerance). Prints one line per
// criterion and exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "plab/suites.hpp"

using namespace plab;
using namespace plab::suites;
using nlohmann::json;

namespace {

constexpr uint64_t kSeed = 42;

struct CriterionResult {
    int number;
    std::string title;
    uint64_t checks = 0;
    uint64_t failures = 0;
    std::vector<std::string> details;
};

std::vector<std::array<uint32_t, 4>> grid(uint32_t nmax, uint32_t mmax, uint32_t kmax) {
    std::vector<std::array<uint32_t, 4>> out;
    for (uint32_t n = 2; n <= nmax; ++n)
        for (uint32_t m = 1; m <= mmax; ++m)
            for (uint32_t k = 1; k <= kmax; ++k)
                for (uint32_t l = 1; l < n; ++l) out.push_back({n, m, k, l});
    return out;
}

Report run_suite(const std::string& suite, std::vector<std::array<uint32_t, 4>> tuples,
                 uint32_t samples) {
    RunConfig cfg;
    cfg.tuples = std::move(tuples);
    cfg.seed = kSeed;
    cfg.samples = samples;
    cfg.suites = {suite};
    return run(cfg);
}

void collect(const Report& report, const std::set<std::string>& claims,
             CriterionResult& criterion,
             const std::function<bool(const SuiteResult&)>& tuple_filter = nullptr) {
    for (const auto& sr : report.results) {
        if (tuple_filter && !tuple_filter(sr)) continue;
        for (const auto& c : sr.claims) {
            if (!claims.empty() && !claims.count(c.claim)) continue;
            criterion.checks += c.samples ? c.samples : 1;
            criterion.failures += c.failures.size();
            if (!c.failures.empty()) {
                criterion.details.push_back(
                    "  " + sr.suite + " n=" + std::to_string(sr.n) + " m=" + std::to_string(sr.m) +
                    " k=" + std::to_string(sr.k) + " l=" + std::to_string(sr.l) + " " + c.claim +
                    ": " + c.failures.dump());
            }
        }
    }
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CriterionResult> criteria;

    {
        CriterionResult c;
        c.number = 1;
        c.title = "commutator relations of the adapted frames, full grid";
        Report r = run_suite("commutators", grid(3, 2, 3), 1);
        collect(r, {"frame-commutators"}, c);
        criteria.push_back(std::move(c));
    }
    {
        CriterionResult c;
        c.number = 2;
        c.title = "prolongation bijection: solution dimensions and inverse maps";
        Report r = run_suite("prolongation", grid(3, 2, 3), 20);
        collect(r,
                {"solution-dimension", "q-plane-inverse", "integrality-of-projected-planes",
                 "condition-equivalence", "curvature-vs-conditions"},
                c);
        criteria.push_back(std::move(c));
    }
    Report pasting_report = run_suite("pasting", grid(3, 2, 3), 100);
    {
        CriterionResult c;
        c.number = 3;
        c.title = "pasting conditions equal the level-0 prolongation constraints";
        collect(pasting_report, {"pasting-matrix-equality"}, c,
                [](const SuiteResult& sr) { return sr.l >= 2; });
        criteria.push_back(std::move(c));
    }
    {
        CriterionResult c;
        c.number = 4;
        c.title = "polar distribution identified by both routes, 100 samples";
        Report r = run_suite("polar",
                             {{2, 1, 1, 1}, {2, 1, 2, 1}, {3, 1, 1, 2}, {3, 2, 2, 2}, {3, 1, 3, 1}},
                             100);
        collect(r, {"polar-identification", "polar-non-member-coverage"}, c);
        criteria.push_back(std::move(c));
    }
    {
        CriterionResult c;
        c.number = 5;
        c.title = "glue round trip and detection of injected violations";
        collect(pasting_report, {"glue-roundtrip", "violation-detection"}, c);
        criteria.push_back(std::move(c));
    }
    Report stab_report = run_suite("stabilization", grid(3, 2, 3), 100);
    {
        CriterionResult c;
        c.number = 6;
        c.title = "stabilization above the flag space for l > 1";
        collect(stab_report,
                {"unique-top-solution", "top-span-involutive", "graph-integral-leaf"}, c,
                [](const SuiteResult& sr) { return sr.l > 1; });
        criteria.push_back(std::move(c));
    }
    {
        CriterionResult c;
        c.number = 7;
        c.title = "l = 1 degeneracy: empty conditions and jet-tower fibers";
        collect(stab_report, {"degenerate-conditions-empty", "jet-tower-fibers"}, c,
                [](const SuiteResult& sr) { return sr.l == 1; });
        criteria.push_back(std::move(c));
    }
    {
        CriterionResult c;
        c.number = 8;
        c.title = "metasymplectic form matches the symbolic frame brackets";
        std::vector<std::array<uint32_t, 4>> tuples;
        for (uint32_t n = 2; n <= 3; ++n)
            for (uint32_t m = 1; m <= 2; ++m)
                for (uint32_t k = 2; k <= 3; ++k) tuples.push_back({n, m, k, 1});
        Report r = run_suite("oracle", tuples, 1);
        collect(r, {"metasymplectic-brackets"}, c);
        criteria.push_back(std::move(c));
    }

    uint64_t total_failures = 0;
    for (const auto& c : criteria) {
        std::printf("%s criterion %d: %s (checks=%llu, failures=%llu)\n",
                    c.failures == 0 ? "PASS" : "FAIL", c.number, c.title.c_str(),
                    static_cast<unsigned long long>(c.checks),
                    static_cast<unsigned long long>(c.failures));
        for (const auto& d : c.details) std::printf("%s\n", d.c_str());
        total_failures += c.failures;
    }
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("%s: 8 criteria, %llu failures, %lld ms\n",
                total_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                static_cast<unsigned long long>(total_failures), static_cast<long long>(dt));
    return total_failures == 0 ? 0 : 1;
}

#include "plab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <set>
#include <thread>

#include "plab/frames.hpp"
#include "plab/jetmodel.hpp"
#include "plab/pasting.hpp"
#include "plab/rng.hpp"
#include "plab/tower.hpp"

namespace plab::suites {

using nlohmann::json;

namespace {

json tuple_params(const Frame& fr) {
    return json{{"n", fr.n}, {"m", fr.m}, {"k", fr.k}, {"l", fr.l}};
}

HomPoly random_poly(const Frame& fr, SplitMix64& rng) {
    HomPoly f(fr);
    for (const auto& [delta, lambda] : fr.all_pairs())
        for (uint32_t h = 0; h < fr.m; ++h)
            if (rng.next_u64() % 3 != 0) f.set_coeff(delta, lambda, h, rng.small_rational());
    return f;
}

PlaneCoords random_plane(const Frame& fr, SplitMix64& rng) {
    PlaneCoords A(fr.d(), fr.l);
    for (auto& c : A.a) c = rng.small_rational();
    return A;
}

tower::TowerPoint random_point(const Frame& fr, int level, SplitMix64& rng) {
    CoeffMap v;
    for (int t = 0; t <= level; ++t) {
        for (const auto& [delta, lambda] : fr.pairs_with_delta_total(static_cast<uint32_t>(t))) {
            for (uint32_t h = 0; h < fr.m; ++h) {
                Rational c = rng.small_rational();
                if (!c.is_zero()) v[HKey{delta, lambda, h}] = c;
            }
        }
    }
    return tower::make_tower_point(fr, level, random_plane(fr, rng), std::move(v));
}

std::vector<std::string> matrix_row_forms(const RationalMatrix& M) {
    std::vector<std::string> rows;
    for (size_t r = 0; r < M.rows(); ++r) {
        std::string s;
        for (size_t c = 0; c < M.cols(); ++c) {
            if (M.at(r, c).is_zero()) continue;
            s += "[" + std::to_string(c) + "]=" + M.at(r, c).str() + ";";
        }
        rows.push_back(std::move(s));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"commutators", "oracle",        "pasting",
                                                   "polar",       "prolongation", "stabilization"};
    return names;
}

std::vector<ClaimResult> run_commutators(const Frame& fr, uint64_t, uint32_t) {
    ClaimResult claim;
    claim.claim = "frame-commutators";
    claim.parameters = tuple_params(fr);
    frames::CommutatorReport report = frames::verify_commutators(fr);
    claim.samples = report.pairs_checked;
    for (const auto& f : report.failures) {
        claim.failures.push_back(json{
            {"chart", f.chart}, {"pair", f.pair}, {"expected", f.expected}, {"got", f.got},
            {"status", "mismatch"}});
    }
    return {claim};
}

std::vector<ClaimResult> run_oracle(const Frame& fr, uint64_t seed, uint32_t samples) {
    std::vector<ClaimResult> out;
    SplitMix64 rng(seed);
    jet::JetModel model = jet::JetModel::at_origin(fr);

    if (fr.k >= 2) {
        ClaimResult claim;
        claim.claim = "metasymplectic-brackets";
        claim.parameters = tuple_params(fr);
        jet::BracketCheckReport rep = model.curvature_bracket_check();
        claim.samples = rep.pairs_checked;
        for (const auto& f : rep.failures) claim.failures.push_back(json{{"pair", f}});
        out.push_back(std::move(claim));
    }

    {
        ClaimResult claim;
        claim.claim = "flag-roundtrip";
        claim.parameters = tuple_params(fr);
        for (uint32_t s = 0; s < samples; ++s) {
            ++claim.samples;
            PlaneCoords A = random_plane(fr, rng);
            HomPoly f = random_poly(fr, rng);
            jet::Flag flag = model.flag_compose(A, f);
            if (!model.is_integral(flag.L) || !model.is_integral(flag.R)) {
                claim.failures.push_back(json{{"sample", s}, {"status", "flag not integral"}});
                continue;
            }
            auto [A2, f2] = model.flag_decompose(flag.L, flag.R);
            if (!(A2 == A) || !(f2 == f))
                claim.failures.push_back(json{{"sample", s}, {"status", "round trip mismatch"}});
        }
        out.push_back(std::move(claim));
    }

    if (fr.k <= 2) {
        ClaimResult claim;
        claim.claim = "integral-chart-dimension";
        claim.parameters = tuple_params(fr);
        uint64_t chart_fiber = 0;
        for (uint32_t t = 0; t <= fr.k; ++t)
            chart_fiber += fr.m * multiindex_count(fr.d(), t) * multiindex_count(fr.l, fr.degree() - t);
        for (int s = 0; s < 3; ++s) {
            ++claim.samples;
            size_t got = model.integral_fiber_dim(random_plane(fr, rng));
            if (got != chart_fiber) {
                claim.failures.push_back(
                    json{{"sample", s}, {"expected", chart_fiber}, {"got", got}});
            }
        }
        out.push_back(std::move(claim));
    }
    return out;
}

std::vector<ClaimResult> run_prolongation(const Frame& fr, uint64_t seed, uint32_t samples) {
    std::vector<ClaimResult> out;
    SplitMix64 rng(seed);

    {
        ClaimResult claim;
        claim.claim = "solution-dimension";
        claim.parameters = tuple_params(fr);
        for (uint32_t q = 2; q <= fr.degree(); ++q) {
            for (uint32_t s = 0; s < samples; ++s) {
                ++claim.samples;
                tower::TowerPoint phi = random_point(fr, static_cast<int>(q) - 1, rng);
                tower::PlaneEnumeration sol = tower::enumerate_integral_planes(phi);
                if (sol.dim != tower::fiber_dim(fr, q)) {
                    claim.failures.push_back(json{{"q", q},
                                                  {"expected", tower::fiber_dim(fr, q)},
                                                  {"got", sol.dim}});
                }
            }
        }
        out.push_back(std::move(claim));
    }

    {
        ClaimResult claim;
        claim.claim = "q-plane-inverse";
        claim.parameters = tuple_params(fr);
        for (uint32_t q = 2; q <= fr.degree(); ++q) {
            for (uint32_t s = 0; s < samples; ++s) {
                ++claim.samples;
                tower::TowerPoint phi = random_point(fr, static_cast<int>(q), rng);
                auto back = tower::read_back(tower::q_plane_of(phi));
                if (!back || !(*back == phi)) {
                    claim.failures.push_back(json{{"q", q}, {"status", "point round trip failed"}});
                }
            }
            // solution -> lift -> plane round trip over the nullspace basis
            tower::TowerPoint base = random_point(fr, static_cast<int>(q) - 1, rng);
            tower::PlaneEnumeration sol = tower::enumerate_integral_planes(base);
            for (const auto& vec : sol.basis) {
                ++claim.samples;
                tower::QCoefficients Q;
                Q.base = base;
                Q.C = sol.cons.vector_as_coefficients(vec);
                auto lifted = tower::read_back(Q);
                if (!lifted) {
                    claim.failures.push_back(json{{"q", q}, {"status", "solution not liftable"}});
                    continue;
                }
                tower::QCoefficients Q2 = tower::q_plane_of(*lifted);
                if (!(Q2.C == Q.C))
                    claim.failures.push_back(json{{"q", q}, {"status", "plane round trip failed"}});
            }
        }
        out.push_back(std::move(claim));
    }

    {
        ClaimResult claim;
        claim.claim = "integrality-of-projected-planes";
        claim.parameters = tuple_params(fr);
        for (uint32_t q = 1; q <= fr.degree(); ++q) {
            for (uint32_t s = 0; s < std::min<uint32_t>(samples, 10); ++s) {
                ++claim.samples;
                tower::TowerPoint phi = random_point(fr, static_cast<int>(q), rng);
                bool ok = false;
                try {
                    ok = tower::is_integral_plane(tower::q_plane_of(phi));
                } catch (const std::logic_error& e) {
                    claim.failures.push_back(json{{"q", q}, {"status", e.what()}});
                    continue;
                }
                if (!ok) claim.failures.push_back(json{{"q", q}, {"status", "projected plane not integral"}});
            }
        }
        out.push_back(std::move(claim));
    }

    {
        // the index conditions of integrality agree with the image conditions
        // away from the bottom level
        ClaimResult claim;
        claim.claim = "condition-equivalence";
        claim.parameters = tuple_params(fr);
        for (uint32_t r = 1; r <= fr.k; ++r) {
            ++claim.samples;
            tower::ConstraintSystem a = tower::integral_constraints(fr, r);
            tower::ConstraintSystem b = tower::prolongation_constraints(fr, r);
            RationalMatrix stacked(0, a.columns.size());
            for (size_t row = 0; row < a.M.rows(); ++row) {
                RationalVector v(a.columns.size());
                for (size_t c = 0; c < a.columns.size(); ++c) v[c] = a.M.at(row, c);
                stacked.append_row(v);
            }
            for (size_t row = 0; row < b.M.rows(); ++row) {
                RationalVector v(b.columns.size());
                for (size_t c = 0; c < b.columns.size(); ++c) v[c] = b.M.at(row, c);
                stacked.append_row(v);
            }
            size_t ra = a.M.rank(), rb = b.M.rank(), rs = stacked.rank();
            if (ra != rs || rb != rs) {
                claim.failures.push_back(
                    json{{"level", r}, {"rank_integral", ra}, {"rank_image", rb}, {"rank_joint", rs}});
            }
        }
        out.push_back(std::move(claim));
    }

    {
        // curvature route vs index route on random tensors, including
        // violating ones (the cross-check inside is_integral_plane throws on
        // any disagreement)
        ClaimResult claim;
        claim.claim = "curvature-vs-conditions";
        claim.parameters = tuple_params(fr);
        for (uint32_t r = 1; r <= fr.degree(); ++r) {
            tower::ConstraintSystem cons = tower::integral_constraints(fr, r);
            for (uint32_t s = 0; s < std::min<uint32_t>(samples, 10); ++s) {
                ++claim.samples;
                tower::QCoefficients Q;
                Q.base = random_point(fr, static_cast<int>(r), rng);
                for (const auto& key : cons.columns) {
                    Rational c = rng.small_rational();
                    if (!c.is_zero()) Q.C[key] = c;
                }
                try {
                    (void)tower::is_integral_plane(Q);
                } catch (const std::logic_error& e) {
                    claim.failures.push_back(json{{"level", r}, {"status", e.what()}});
                }
            }
        }
        out.push_back(std::move(claim));
    }
    return out;
}

std::vector<ClaimResult> run_polar(const Frame& fr, uint64_t seed, uint32_t samples) {
    ClaimResult claim;
    claim.claim = "polar-identification";
    claim.parameters = tuple_params(fr);
    tower::PolarReport report = tower::verify_polar(fr, seed, samples);
    claim.samples = report.vectors_checked;
    for (const auto& f : report.failures) claim.failures.push_back(json{{"status", f}});
    ClaimResult coverage;
    coverage.claim = "polar-non-member-coverage";
    coverage.parameters = tuple_params(fr);
    coverage.samples = report.non_members_seen;
    if (report.non_members_seen == 0)
        coverage.failures.push_back(json{{"status", "no non-member vectors sampled"}});
    return {claim, coverage};
}

std::vector<ClaimResult> run_pasting(const Frame& fr, uint64_t seed, uint32_t samples) {
    std::vector<ClaimResult> out;
    SplitMix64 rng(seed);

    {
        // criterion: the infinitesimal pasting matrix is the level-0
        // prolongation matrix up to row order
        ClaimResult claim;
        claim.claim = "pasting-matrix-equality";
        claim.parameters = tuple_params(fr);
        claim.samples = 1;
        tower::ConstraintSystem a = pasting::infinitesimal_constraints(fr);
        tower::ConstraintSystem b = tower::prolongation_constraints(fr, 0);
        bool same_columns = a.columns.size() == b.columns.size();
        for (size_t c = 0; same_columns && c < a.columns.size(); ++c)
            same_columns = a.columns[c] == b.columns[c];
        if (!same_columns || !(matrix_row_forms(a.M) == matrix_row_forms(b.M))) {
            claim.failures.push_back(json{{"status", "matrices differ"},
                                          {"pasting_rows", a.M.rows()},
                                          {"prolongation_rows", b.M.rows()}});
        }
        out.push_back(std::move(claim));
    }

    {
        ClaimResult claim;
        claim.claim = "glue-roundtrip";
        claim.parameters = tuple_params(fr);
        for (uint32_t s = 0; s < samples; ++s) {
            ++claim.samples;
            HomPoly f = random_poly(fr, rng);
            pasting::GlueResult r = pasting::glue(pasting::section_from_jet(f));
            if (r.status != pasting::GlueResult::Status::Glued || !(r.f == f)) {
                claim.failures.push_back(json{{"sample", s}, {"status", "glue round trip failed"}});
            }
        }
        out.push_back(std::move(claim));
    }

    {
        // every single-coordinate violation of either condition family is
        // detected symbolically and by the gluing probe
        ClaimResult claim;
        claim.claim = "violation-detection";
        claim.parameters = tuple_params(fr);
        HomPoly f = random_poly(fr, rng);
        pasting::Section base = pasting::section_from_jet(f);
        auto check_detected = [&](pasting::Section s, const json& where) {
            ++claim.samples;
            bool infinitesimal = !pasting::check_infinitesimal(s).empty();
            bool glued = pasting::glue(s).status == pasting::GlueResult::Status::NotHolonomic;
            if (!infinitesimal || !glued) {
                json f2 = where;
                f2["detected_infinitesimal"] = infinitesimal;
                f2["detected_by_glue"] = glued;
                claim.failures.push_back(f2);
            }
        };
        for (uint32_t i = 0; i < fr.d(); ++i) {
            for (const MultiIndex& mu : enumerate_multiindices(fr.l, fr.k)) {
                for (uint32_t j = 0; j < fr.l; ++j) {
                    for (uint32_t j2 = j + 1; j2 < fr.l; ++j2) {
                        for (uint32_t h = 0; h < fr.m; ++h) {
                            pasting::Section s = base;
                            s.set_value(mu.shifted_up(j), h,
                                        s.value(mu.shifted_up(j), h) +
                                            Poly::variable(i * fr.l + j));
                            check_detected(std::move(s),
                                           json{{"kind", "cross-derivative"},
                                                {"i", i + 1},
                                                {"j", j + 1},
                                                {"j2", j2 + 1},
                                                {"h", h + 1}});
                        }
                    }
                }
            }
        }
        for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
            for (uint32_t j = 0; j < fr.l; ++j) {
                if (lambda[j] != 0) continue;
                for (uint32_t i = 0; i < fr.d(); ++i) {
                    for (uint32_t h = 0; h < fr.m; ++h) {
                        pasting::Section s = base;
                        s.set_value(lambda, h, s.value(lambda, h) + Poly::variable(i * fr.l + j));
                        check_detected(std::move(s), json{{"kind", "zero-condition"},
                                                          {"i", i + 1},
                                                          {"j", j + 1},
                                                          {"h", h + 1}});
                    }
                }
            }
        }
        out.push_back(std::move(claim));
    }

    {
        ClaimResult claim;
        claim.claim = "global-implies-infinitesimal";
        claim.parameters = tuple_params(fr);
        for (int t = 0; t < 4; ++t) {
            ++claim.samples;
            HomPoly f = random_poly(fr, rng);
            pasting::Section s = pasting::section_from_jet(f);
            bool global_ok = true;
            for (int p = 0; p < 50 && global_ok; ++p)
                global_ok = pasting::check_global(s, random_plane(fr, rng), random_plane(fr, rng));
            bool inf_ok = pasting::check_infinitesimal(s).empty();
            if (!global_ok || !inf_ok) {
                claim.failures.push_back(json{{"sample", t},
                                              {"global", global_ok},
                                              {"infinitesimal", inf_ok}});
            }
        }
        out.push_back(std::move(claim));
    }

    {
        ClaimResult claim;
        claim.claim = "first-jet-agreement";
        claim.parameters = tuple_params(fr);
        for (uint32_t s = 0; s < samples; ++s) {
            ++claim.samples;
            // alternate between holonomic sections and perturbed ones
            HomPoly f = random_poly(fr, rng);
            pasting::Section sec = pasting::section_from_jet(f);
            if (s % 2 == 1 && fr.l > 1) {
                std::vector<uint32_t> top(fr.l, 0);
                top[s % fr.l] = fr.degree();
                sec.set_value(MultiIndex(top), s % fr.m,
                              sec.value(MultiIndex(top), s % fr.m) +
                                  Poly::variable(rng.next_u64() % (fr.d() * fr.l)));
            }
            PlaneCoords A = random_plane(fr, rng);
            bool via_plane = pasting::first_jet_in_equation(sec, A);
            // independent route: evaluate every instance of the conditions at A
            bool manual = true;
            auto eval_at = [&](const Poly& p) {
                return p.eval([&](uint32_t var) { return A.a[var]; });
            };
            for (uint32_t i = 0; i < fr.d() && manual; ++i)
                for (const MultiIndex& mu : enumerate_multiindices(fr.l, fr.k))
                    for (uint32_t j = 0; j < fr.l && manual; ++j)
                        for (uint32_t j2 = j + 1; j2 < fr.l && manual; ++j2)
                            for (uint32_t h = 0; h < fr.m && manual; ++h)
                                if (!(eval_at(sec.value(mu.shifted_up(j), h).derivative(i * fr.l + j)) ==
                                      eval_at(sec.value(mu.shifted_up(j2), h).derivative(i * fr.l + j2))))
                                    manual = false;
            for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree()))
                for (uint32_t j = 0; j < fr.l && manual; ++j) {
                    if (lambda[j] != 0) continue;
                    for (uint32_t i = 0; i < fr.d() && manual; ++i)
                        for (uint32_t h = 0; h < fr.m && manual; ++h)
                            if (!eval_at(sec.value(lambda, h).derivative(i * fr.l + j)).is_zero())
                                manual = false;
                }
            if (via_plane != manual)
                claim.failures.push_back(json{{"sample", s}, {"status", "routes disagree"}});
        }
        out.push_back(std::move(claim));
    }
    return out;
}

std::vector<ClaimResult> run_stabilization(const Frame& fr, uint64_t seed, uint32_t samples) {
    std::vector<ClaimResult> out;
    SplitMix64 rng(seed);

    if (fr.l > 1) {
        {
            ClaimResult claim;
            claim.claim = "unique-top-solution";
            claim.parameters = tuple_params(fr);
            claim.samples = 1;
            tower::TowerPoint top = random_point(fr, static_cast<int>(fr.degree()), rng);
            tower::PlaneEnumeration sol = tower::enumerate_integral_planes(top);
            if (sol.dim != 0)
                claim.failures.push_back(json{{"expected", 0}, {"got", sol.dim}});
            out.push_back(std::move(claim));
        }
        {
            ClaimResult claim;
            claim.claim = "top-span-involutive";
            claim.parameters = tuple_params(fr);
            frames::Chart chart(fr, frames::ChartKind::Adapted, fr.degree());
            std::vector<frames::Derivation> fields;
            for (uint32_t i = 0; i < fr.d(); ++i)
                for (uint32_t j = 0; j < fr.l; ++j)
                    fields.push_back(frames::total_derivative(chart, i, j));
            for (int t = 0; t < 3; ++t) {
                ++claim.samples;
                RationalVector point(chart.var_count());
                for (auto& c : point) c = rng.small_rational();
                auto dims = frames::span_closure_dims(fields, point);
                if (dims.size() != 1 || dims[0] != fr.d() * fr.l)
                    claim.failures.push_back(json{{"dims", dims}});
            }
            out.push_back(std::move(claim));
        }
        {
            ClaimResult claim;
            claim.claim = "graph-integral-leaf";
            claim.parameters = tuple_params(fr);
            uint32_t cases = std::min<uint32_t>(samples, 10);
            for (uint32_t t = 0; t < cases; ++t) {
                ++claim.samples;
                HomPoly f = t == 0 ? HomPoly(fr) : random_poly(fr, rng);
                if (!pasting::graph_is_integral_leaf(f))
                    claim.failures.push_back(json{{"sample", t}});
            }
            out.push_back(std::move(claim));
        }
    } else {
        {
            ClaimResult claim;
            claim.claim = "degenerate-conditions-empty";
            claim.parameters = tuple_params(fr);
            claim.samples = 1;
            tower::ConstraintSystem cons = tower::prolongation_constraints(fr, 0);
            if (cons.M.rows() != 0)
                claim.failures.push_back(json{{"rows", cons.M.rows()}});
            tower::TowerPoint phi0 = random_point(fr, 0, rng);
            size_t dim = tower::enumerate_integral_planes(phi0).dim;
            if (dim != fr.d() * fr.l * fr.m * multiindex_count(fr.l, fr.degree()))
                claim.failures.push_back(json{{"level0_dim", dim}});
            out.push_back(std::move(claim));
        }
        {
            ClaimResult claim;
            claim.claim = "jet-tower-fibers";
            claim.parameters = tuple_params(fr);
            for (uint32_t q = 0; q <= fr.degree(); ++q) {
                ++claim.samples;
                uint64_t lhs = tower::level_dim(fr, static_cast<int>(q)) -
                               tower::level_dim(fr, static_cast<int>(q) - 1);
                uint64_t rhs = fr.m * binomial(q + fr.d() - 1, fr.d() - 1);
                if (lhs != rhs)
                    claim.failures.push_back(json{{"q", q}, {"lhs", lhs}, {"rhs", rhs}});
            }
            out.push_back(std::move(claim));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// configuration

namespace {

void validate_tuple(uint32_t n, uint32_t m, uint32_t k, uint32_t l) {
    if (n < 2) throw ConfigError("invalid tuple: need n >= 2");
    if (m < 1) throw ConfigError("invalid tuple: need m >= 1");
    if (k < 1) throw ConfigError("invalid tuple: need k >= 1");
    if (l < 1 || l >= n) throw ConfigError("invalid tuple: need 1 <= l < n");
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    try {
        if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
        if (j.contains("samples")) cfg.samples = j.at("samples").get<uint32_t>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<uint32_t>();

        if (j.contains("tuples")) {
            for (const auto& t : j.at("tuples")) {
                if (!t.is_array() || t.size() != 4)
                    throw ConfigError("tuples entries must be [n, m, k, l]");
                cfg.tuples.push_back({t.at(0).get<uint32_t>(), t.at(1).get<uint32_t>(),
                                      t.at(2).get<uint32_t>(), t.at(3).get<uint32_t>()});
            }
        } else if (j.contains("grid")) {
            const auto& g = j.at("grid");
            uint32_t nmax = g.value("nmax", 3u);
            uint32_t mmax = g.value("mmax", 2u);
            uint32_t kmax = g.value("kmax", 2u);
            for (uint32_t n = 2; n <= nmax; ++n)
                for (uint32_t m = 1; m <= mmax; ++m)
                    for (uint32_t k = 1; k <= kmax; ++k)
                        for (uint32_t l = 1; l < n; ++l) cfg.tuples.push_back({n, m, k, l});
            if (cfg.tuples.empty()) throw ConfigError("grid is empty: need nmax >= 2");
        } else {
            uint32_t n = j.value("n", 0u), m = j.value("m", 0u), k = j.value("k", 0u),
                     l = j.value("l", 0u);
            if (n == 0 || m == 0 || k == 0 || l == 0)
                throw ConfigError("config needs either n/m/k/l, tuples, or grid");
            cfg.tuples.push_back({n, m, k, l});
        }
        for (const auto& t : cfg.tuples) validate_tuple(t[0], t[1], t[2], t[3]);

        std::set<std::string> chosen;
        if (j.contains("suites")) {
            for (const auto& s : j.at("suites")) {
                std::string name = s.get<std::string>();
                if (name == "all") {
                    for (const auto& sn : suite_names()) chosen.insert(sn);
                } else if (std::find(suite_names().begin(), suite_names().end(), name) !=
                           suite_names().end()) {
                    chosen.insert(name);
                } else {
                    throw ConfigError("unknown suite: " + name);
                }
            }
        }
        if (chosen.empty())
            for (const auto& sn : suite_names()) chosen.insert(sn);
        cfg.suites.assign(chosen.begin(), chosen.end());
        if (cfg.samples < 1) throw ConfigError("samples must be positive");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json tuples = json::array();
    for (const auto& t : cfg.tuples) tuples.push_back(json::array({t[0], t[1], t[2], t[3]}));
    return json{{"tuples", tuples},
                {"seed", cfg.seed},
                {"samples", cfg.samples},
                {"suites", cfg.suites},
                {"threads", cfg.threads}};
}

// ---------------------------------------------------------------------------
// execution

namespace {

using SuiteFn = std::vector<ClaimResult> (*)(const Frame&, uint64_t, uint32_t);

SuiteFn suite_fn(const std::string& name) {
    if (name == "commutators") return run_commutators;
    if (name == "oracle") return run_oracle;
    if (name == "pasting") return run_pasting;
    if (name == "polar") return run_polar;
    if (name == "prolongation") return run_prolongation;
    if (name == "stabilization") return run_stabilization;
    throw ConfigError("unknown suite: " + name);
}

uint64_t mix_seed(uint64_t seed, size_t suite_idx, const std::array<uint32_t, 4>& t) {
    uint64_t h = seed;
    auto mix = [&](uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(suite_idx + 1);
    for (uint32_t v : t) mix(v);
    return h;
}

uint32_t thread_cap(const RunConfig& cfg, size_t tasks) {
    uint32_t cap = cfg.threads;
    if (cap == 0) {
        if (const char* env = std::getenv("PROLONGATION_LAB_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end && *end == '\0' && v > 0) cap = static_cast<uint32_t>(v);
        }
    }
    if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<uint32_t>(std::min<size_t>(cap, tasks));
}

}  // namespace

Report run(const RunConfig& cfg) {
    Report report;
    report.config = cfg;

    struct Task {
        size_t slot;
        std::string suite;
        size_t suite_idx;
        std::array<uint32_t, 4> tuple;
    };
    std::vector<Task> tasks;
    for (size_t ti = 0; ti < cfg.tuples.size(); ++ti) {
        for (size_t si = 0; si < cfg.suites.size(); ++si) {
            tasks.push_back({tasks.size(), cfg.suites[si], si, cfg.tuples[ti]});
        }
    }
    report.results.resize(tasks.size());

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t idx = next.fetch_add(1);
            if (idx >= tasks.size()) return;
            const Task& task = tasks[idx];
            Frame fr(task.tuple[0], task.tuple[1], task.tuple[2], task.tuple[3]);
            SuiteResult result;
            result.suite = task.suite;
            result.n = fr.n;
            result.m = fr.m;
            result.k = fr.k;
            result.l = fr.l;
            result.claims =
                suite_fn(task.suite)(fr, mix_seed(cfg.seed, task.suite_idx, task.tuple), cfg.samples);
            report.results[task.slot] = std::move(result);
        }
    };
    uint32_t nthreads = thread_cap(cfg, tasks.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (uint32_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& sr : report.results)
        for (const auto& claim : sr.claims) report.failure_count += claim.failures.size();
    return report;
}

json report_to_json(const Report& report) {
    json results = json::array();
    for (const auto& sr : report.results) {
        json claims = json::array();
        for (const auto& c : sr.claims) {
            claims.push_back(json{{"claim", c.claim},
                                  {"parameters", c.parameters},
                                  {"samples", c.samples},
                                  {"failures", c.failures},
                                  {"status", c.pass() ? "pass" : "fail"}});
        }
        results.push_back(json{{"suite", sr.suite},
                               {"n", sr.n},
                               {"m", sr.m},
                               {"k", sr.k},
                               {"l", sr.l},
                               {"claims", claims}});
    }
    return json{{"schema", "prolongation-lab-report/1"},
                {"config", config_to_json(report.config)},
                {"results", results},
                {"failures", report.failure_count},
                {"status", report.pass() ? "pass" : "fail"}};
}

std::string report_to_text(const Report& report) {
    std::string out;
    for (const auto& sr : report.results) {
        for (const auto& c : sr.claims) {
            out += c.pass() ? "[PASS] " : "[FAIL] ";
            out += sr.suite + " (n=" + std::to_string(sr.n) + ", m=" + std::to_string(sr.m) +
                   ", k=" + std::to_string(sr.k) + ", l=" + std::to_string(sr.l) + ") " + c.claim +
                   ": samples=" + std::to_string(c.samples) +
                   " failures=" + std::to_string(c.failures.size()) + "\n";
        }
    }
    out += report.pass() ? "ALL CHECKS PASSED"
                         : "FAILURES: " + std::to_string(report.failure_count);
    out += "\n";
    return out;
}

std::string report_schema_json() {
    static const json schema = {
        {"$schema", "http://json-schema.org/draft-07/schema#"},
        {"title", "prolongation-lab verification report"},
        {"type", "object"},
        {"required", json::array({"schema", "config", "results", "failures", "status"})},
        {"properties",
         json{{"schema", json{{"const", "prolongation-lab-report/1"}}},
              {"config",
               json{{"type", "object"},
                    {"required", json::array({"tuples", "seed", "samples", "suites", "threads"})},
                    {"properties",
                     json{{"tuples",
                           json{{"type", "array"},
                                {"items", json{{"type", "array"},
                                               {"items", json{{"type", "integer"}, {"minimum", 1}}},
                                               {"minItems", 4},
                                               {"maxItems", 4}}}}},
                          {"seed", json{{"type", "integer"}, {"minimum", 0}}},
                          {"samples", json{{"type", "integer"}, {"minimum", 1}}},
                          {"suites", json{{"type", "array"}, {"items", json{{"type", "string"}}}}},
                          {"threads", json{{"type", "integer"}, {"minimum", 0}}}}}}},
              {"results",
               json{{"type", "array"},
                    {"items",
                     json{{"type", "object"},
                          {"required", json::array({"suite", "n", "m", "k", "l", "claims"})},
                          {"properties",
                           json{{"suite", json{{"type", "string"}}},
                                {"n", json{{"type", "integer"}}},
                                {"m", json{{"type", "integer"}}},
                                {"k", json{{"type", "integer"}}},
                                {"l", json{{"type", "integer"}}},
                                {"claims",
                                 json{{"type", "array"},
                                      {"items",
                                       json{{"type", "object"},
                                            {"required",
                                             json::array({"claim", "parameters", "samples",
                                                          "failures", "status"})},
                                            {"properties",
                                             json{{"claim", json{{"type", "string"}}},
                                                  {"parameters", json{{"type", "object"}}},
                                                  {"samples", json{{"type", "integer"}}},
                                                  {"failures", json{{"type", "array"}}},
                                                  {"status",
                                                   json{{"enum", json::array({"pass", "fail"})}}}}}}}}}}}}}}},
              {"failures", json{{"type", "integer"}, {"minimum", 0}}},
              {"status", json{{"enum", json::array({"pass", "fail"})}}}}}};
    return schema.dump(2) + "\n";
}

std::string report_schema_text() {
    return "prolongation-lab report (schema prolongation-lab-report/1)\n"
           "  config: tuples [n,m,k,l], seed, samples, suites, threads\n"
           "  results: one entry per (suite, tuple)\n"
           "    claims: name, parameters, samples, failures[], status pass|fail\n"
           "  failures: total failure count; status: pass iff failures == 0\n"
           "Exit codes of the verify command: 0 pass, 1 verification failure, 2 usage error.\n";
}

json dims_json(const Frame& fr) {
    json levels = json::array();
    for (int q = -1; q <= static_cast<int>(fr.degree()); ++q) {
        json entry{{"q", q}, {"dim", tower::level_dim(fr, q)}};
        if (q >= 0) {
            entry["fiber"] = tower::fiber_dim(fr, static_cast<uint32_t>(q));
            entry["fiber_formula"] = "m*C(q+d-1,d-1)*C(k+1-q+l-1,l-1)";
        }
        levels.push_back(entry);
    }
    return json{{"n", fr.n},     {"m", fr.m},
                {"k", fr.k},     {"l", fr.l},
                {"d", fr.d()},   {"levels", levels},
                {"top_label", "flag space"}, {"bottom_label", "plane chart"}};
}

std::string dims_text(const Frame& fr) {
    std::string out = "tower dimensions for n=" + std::to_string(fr.n) + " m=" +
                      std::to_string(fr.m) + " k=" + std::to_string(fr.k) + " l=" +
                      std::to_string(fr.l) + " (d=" + std::to_string(fr.d()) + ")\n";
    for (int q = static_cast<int>(fr.degree()); q >= -1; --q) {
        out += "  level " + std::to_string(q) + ": dim " +
               std::to_string(tower::level_dim(fr, q));
        if (q >= 0)
            out += " (fiber over level " + std::to_string(q - 1) + ": " +
                   std::to_string(tower::fiber_dim(fr, static_cast<uint32_t>(q))) + ")";
        if (q == static_cast<int>(fr.degree())) out += "  <- flag space";
        if (q == static_cast<int>(fr.k)) out += "  <- integral elements";
        if (q == 0) out += "  <- partial extensions";
        if (q == -1) out += "  <- plane chart";
        out += "\n";
    }
    return out;
}

}  // namespace plab::suites

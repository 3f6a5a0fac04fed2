#include "plab/tower.hpp"

#include <stdexcept>

#include "plab/rng.hpp"

namespace plab::tower {

using frames::Chart;
using frames::ChartKind;
using frames::Derivation;

TowerPoint make_tower_point(const Frame& frame, int level, PlaneCoords A, CoeffMap v) {
    if (level < -1 || level > static_cast<int>(frame.degree()))
        throw std::invalid_argument("make_tower_point: level out of range");
    if (A.d != frame.d() || A.l != frame.l)
        throw std::invalid_argument("make_tower_point: plane shape mismatch");
    for (const auto& [key, c] : v) {
        if (key.delta.dim() != frame.d() || key.lambda.dim() != frame.l || key.h >= frame.m ||
            key.delta.total() + key.lambda.total() != frame.degree() ||
            static_cast<int>(key.delta.total()) > level)
            throw std::invalid_argument("make_tower_point: coordinate outside the level chart");
    }
    TowerPoint phi;
    phi.frame = frame;
    phi.level = level;
    phi.A = std::move(A);
    phi.v = std::move(v);
    return phi;
}

TowerPoint project(const TowerPoint& phi, int target_level) {
    if (target_level > phi.level) throw std::invalid_argument("project: target above the level");
    if (target_level < -1) throw std::invalid_argument("project: target below the plane chart");
    TowerPoint out = phi;
    out.level = target_level;
    for (auto it = out.v.begin(); it != out.v.end();) {
        it = static_cast<int>(it->first.delta.total()) > target_level ? out.v.erase(it)
                                                                      : std::next(it);
    }
    return out;
}

Rational QCoefficients::coeff(const QKey& key) const {
    auto it = C.find(key);
    return it == C.end() ? Rational(0) : it->second;
}

QCoefficients q_plane_of(const TowerPoint& phi) {
    if (phi.level < 1) throw std::invalid_argument("q_plane_of: level must be at least 1");
    const Frame& fr = phi.frame;
    QCoefficients out;
    out.base = project(phi, phi.level - 1);
    uint32_t r = static_cast<uint32_t>(phi.level) - 1;
    for (const auto& [delta, lambda] : fr.pairs_with_delta_total(r)) {
        for (uint32_t i = 0; i < fr.d(); ++i) {
            for (uint32_t j = 0; j < fr.l; ++j) {
                if (lambda[j] == 0) continue;
                for (uint32_t h = 0; h < fr.m; ++h) {
                    auto it = phi.v.find(HKey{delta.shifted_up(i), *lambda.shifted_down(j), h});
                    if (it == phi.v.end() || it->second.is_zero()) continue;
                    out.C[QKey{delta, lambda, i, j, h}] = it->second;
                }
            }
        }
    }
    return out;
}

namespace {

std::vector<QKey> enumerate_columns(const Frame& fr, uint32_t level) {
    std::vector<QKey> cols;
    for (const auto& [delta, lambda] : fr.pairs_with_delta_total(level)) {
        for (uint32_t i = 0; i < fr.d(); ++i)
            for (uint32_t j = 0; j < fr.l; ++j)
                for (uint32_t h = 0; h < fr.m; ++h) cols.push_back(QKey{delta, lambda, i, j, h});
    }
    return cols;
}

std::map<QKey, size_t, QKeyLess> column_index(const std::vector<QKey>& cols) {
    std::map<QKey, size_t, QKeyLess> idx;
    for (size_t c = 0; c < cols.size(); ++c) idx[cols[c]] = c;
    return idx;
}

// canonical equality row: +1 on the smaller column, -1 on the larger
RationalVector equality_row(size_t cols, size_t c1, size_t c2) {
    RationalVector row(cols);
    row[std::min(c1, c2)] = Rational(1);
    row[std::max(c1, c2)] = Rational(-1);
    return row;
}

}  // namespace

size_t ConstraintSystem::column_of(const QKey& key) const {
    for (size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] == key) return c;
    }
    throw std::out_of_range("ConstraintSystem::column_of");
}

RationalVector ConstraintSystem::coefficients_as_vector(const QMap& C) const {
    RationalVector x(columns.size());
    for (size_t c = 0; c < columns.size(); ++c) {
        auto it = C.find(columns[c]);
        if (it != C.end()) x[c] = it->second;
    }
    return x;
}

QMap ConstraintSystem::vector_as_coefficients(const RationalVector& x) const {
    if (x.size() != columns.size())
        throw std::invalid_argument("vector_as_coefficients: size mismatch");
    QMap C;
    for (size_t c = 0; c < columns.size(); ++c) {
        if (!x[c].is_zero()) C[columns[c]] = x[c];
    }
    return C;
}

ConstraintSystem integral_constraints(const Frame& fr, uint32_t level) {
    if (level < 1 || level > fr.degree())
        throw std::invalid_argument("integral_constraints: level must be in 1..k+1");
    ConstraintSystem out;
    out.columns = enumerate_columns(fr, level);
    auto idx = column_index(out.columns);
    out.M = RationalMatrix(0, out.columns.size());

    // equalities: C^{D+1_{i'},L-1_{j'}}_{i,j,h} = C^{D+1_i,L-1_j}_{i',j',h}
    // over |D| = level-1, |L| = k+2-level, L_j > 0, L_{j'} > 0
    for (const MultiIndex& bigD : enumerate_multiindices(fr.d(), level - 1)) {
        for (const MultiIndex& bigL : enumerate_multiindices(fr.l, fr.degree() + 1 - level)) {
            for (uint32_t i = 0; i < fr.d(); ++i) {
                for (uint32_t j = 0; j < fr.l; ++j) {
                    if (bigL[j] == 0) continue;
                    for (uint32_t i2 = 0; i2 < fr.d(); ++i2) {
                        for (uint32_t j2 = 0; j2 < fr.l; ++j2) {
                            if (bigL[j2] == 0) continue;
                            if (i2 * fr.l + j2 <= i * fr.l + j) continue;  // unordered pairs once
                            for (uint32_t h = 0; h < fr.m; ++h) {
                                QKey a{bigD.shifted_up(i2), *bigL.shifted_down(j2), i, j, h};
                                QKey b{bigD.shifted_up(i), *bigL.shifted_down(j), i2, j2, h};
                                out.M.append_row(
                                    equality_row(out.columns.size(), idx.at(a), idx.at(b)));
                            }
                        }
                    }
                }
            }
        }
    }
    // zero conditions, present for l > 1 only
    if (fr.l > 1) {
        for (size_t c = 0; c < out.columns.size(); ++c) {
            if (out.columns[c].lambda[out.columns[c].j] == 0) {
                RationalVector row(out.columns.size());
                row[c] = Rational(1);
                out.M.append_row(row);
            }
        }
    }
    return out;
}

ConstraintSystem prolongation_constraints(const Frame& fr, uint32_t level) {
    if (level > fr.k)
        throw std::invalid_argument("prolongation_constraints: level must be in 0..k");
    ConstraintSystem out;
    out.columns = enumerate_columns(fr, level);
    auto idx = column_index(out.columns);
    out.M = RationalMatrix(0, out.columns.size());

    // equalities: C^{D-1_i, mu+1_j}_{i,j,h} = C^{D-1_{i'}, mu+1_{j'}}_{i',j',h}
    // over |D| = level+1 with D_i > 0, D_{i'} > 0, |mu| = k-level
    for (const MultiIndex& bigD : enumerate_multiindices(fr.d(), level + 1)) {
        for (const MultiIndex& mu : enumerate_multiindices(fr.l, fr.k - level)) {
            for (uint32_t i = 0; i < fr.d(); ++i) {
                if (bigD[i] == 0) continue;
                for (uint32_t j = 0; j < fr.l; ++j) {
                    for (uint32_t i2 = 0; i2 < fr.d(); ++i2) {
                        if (bigD[i2] == 0) continue;
                        for (uint32_t j2 = 0; j2 < fr.l; ++j2) {
                            if (i2 * fr.l + j2 <= i * fr.l + j) continue;
                            for (uint32_t h = 0; h < fr.m; ++h) {
                                QKey a{*bigD.shifted_down(i), mu.shifted_up(j), i, j, h};
                                QKey b{*bigD.shifted_down(i2), mu.shifted_up(j2), i2, j2, h};
                                out.M.append_row(
                                    equality_row(out.columns.size(), idx.at(a), idx.at(b)));
                            }
                        }
                    }
                }
            }
        }
    }
    // zero conditions (no l > 1 qualifier here)
    for (size_t c = 0; c < out.columns.size(); ++c) {
        if (out.columns[c].lambda[out.columns[c].j] == 0) {
            RationalVector row(out.columns.size());
            row[c] = Rational(1);
            out.M.append_row(row);
        }
    }
    return out;
}

uint64_t fiber_dim(const Frame& fr, uint32_t q) {
    if (q > fr.degree()) return 0;
    return fr.m * multiindex_count(fr.d(), q) * multiindex_count(fr.l, fr.degree() - q);
}

uint64_t level_dim(const Frame& fr, int q) {
    uint64_t dim = fr.d() * fr.l;
    for (int t = 0; t <= q && t <= static_cast<int>(fr.degree()); ++t)
        dim += fiber_dim(fr, static_cast<uint32_t>(t));
    return dim;
}

ReducedFrame reduced_distribution_basis(const Frame& fr, uint32_t level) {
    ReducedFrame out;
    out.chart = std::make_shared<Chart>(fr, ChartKind::Adapted, level);
    out.d_count = fr.d() * fr.l;
    for (uint32_t i = 0; i < fr.d(); ++i)
        for (uint32_t j = 0; j < fr.l; ++j)
            out.fields.push_back(frames::total_derivative(*out.chart, i, j));
    for (const HKey& key : out.chart->fiber_keys()) {
        if (key.delta.total() == level)
            out.fields.push_back(frames::vertical_field(*out.chart, key.delta, key.lambda, key.h));
    }
    return out;
}

RationalVector chart_point(const Chart& chart, const TowerPoint& phi) {
    if (static_cast<uint32_t>(phi.level) != chart.level() || !(phi.frame == chart.frame()))
        throw std::invalid_argument("chart_point: level/frame mismatch");
    RationalVector p(chart.var_count());
    for (uint32_t i = 0; i < phi.frame.d(); ++i)
        for (uint32_t j = 0; j < phi.frame.l; ++j) p[chart.a_var(i, j)] = phi.A.at(i, j);
    for (const auto& [key, c] : phi.v) p[chart.fiber_var(key.delta, key.lambda, key.h)] = c;
    return p;
}

namespace {

void validate_q(const QCoefficients& Q) {
    const Frame& fr = Q.base.frame;
    if (Q.base.level < 0) throw std::invalid_argument("QCoefficients: base level out of range");
    for (const auto& [key, c] : Q.C) {
        if (key.delta.dim() != fr.d() || key.lambda.dim() != fr.l ||
            key.delta.total() != static_cast<uint64_t>(Q.base.level) ||
            key.delta.total() + key.lambda.total() != fr.degree() || key.i >= fr.d() ||
            key.j >= fr.l || key.h >= fr.m)
            throw std::invalid_argument("QCoefficients: key outside the level grid");
    }
}

bool satisfies(const ConstraintSystem& cons, const QMap& C) {
    RationalVector x = cons.coefficients_as_vector(C);
    RationalVector y = cons.M.apply(x);
    for (const auto& e : y) {
        if (!e.is_zero()) return false;
    }
    return true;
}

}  // namespace

bool is_integral_plane(const QCoefficients& Q) {
    validate_q(Q);
    const Frame& fr = Q.base.frame;
    const uint32_t r = static_cast<uint32_t>(Q.base.level);
    if (r == 0) {
        // the full tangent distribution makes every plane integral; the
        // meaningful conditions at the bottom are the pasting conditions
        return satisfies(prolongation_constraints(fr, 0), Q.C);
    }
    bool index_verdict = satisfies(integral_constraints(fr, r), Q.C);

    // bracket route: the reduced curvature of the spanned plane must vanish
    ReducedFrame red = reduced_distribution_basis(fr, r);
    const Chart& chart = *red.chart;
    std::vector<Derivation> cij(fr.d() * fr.l);
    for (uint32_t i = 0; i < fr.d(); ++i) {
        for (uint32_t j = 0; j < fr.l; ++j) {
            Derivation f = frames::total_derivative(chart, i, j);
            for (const auto& [key, c] : Q.C) {
                if (key.i != i || key.j != j) continue;
                uint32_t var = chart.fiber_var(key.delta, key.lambda, key.h);
                auto it = f.comp.find(var);
                if (it == f.comp.end()) {
                    f.comp[var] = Poly(c);
                } else {
                    it->second += Poly(c);
                }
            }
            cij[i * fr.l + j] = std::move(f);
        }
    }
    RationalVector point = chart_point(chart, Q.base);
    std::vector<RationalVector> span;
    for (const auto& f : red.fields) span.push_back(frames::eval_at(f, point));
    bool bracket_verdict = true;
    for (size_t a = 0; a < cij.size() && bracket_verdict; ++a) {
        for (size_t b = a + 1; b < cij.size() && bracket_verdict; ++b) {
            Derivation br = frames::lie_bracket(cij[a], cij[b]);
            if (br.is_zero()) continue;
            if (!in_span(span, frames::eval_at(br, point))) bracket_verdict = false;
        }
    }
    if (bracket_verdict != index_verdict)
        throw std::logic_error("is_integral_plane: bracket and index verdicts disagree");
    return index_verdict;
}

PlaneEnumeration enumerate_integral_planes(const TowerPoint& phi) {
    const Frame& fr = phi.frame;
    if (phi.level < 0)
        throw std::invalid_argument("enumerate_integral_planes: level must be >= 0");
    const uint32_t r = static_cast<uint32_t>(phi.level);
    PlaneEnumeration out;
    out.cons = (r == 0) ? prolongation_constraints(fr, 0) : integral_constraints(fr, r);
    out.basis = out.cons.M.rows() == 0 ? RationalMatrix(0, out.cons.columns.size()).nullspace()
                                       : out.cons.M.nullspace();
    out.dim = out.basis.size();
    return out;
}

std::optional<TowerPoint> read_back(const QCoefficients& Q) {
    validate_q(Q);
    const Frame& fr = Q.base.frame;
    const uint32_t r = static_cast<uint32_t>(Q.base.level);
    if (r + 1 > fr.degree()) throw std::invalid_argument("read_back: already at the top level");
    TowerPoint out = Q.base;
    out.level = static_cast<int>(r) + 1;
    for (const auto& [bigD, bigL] : fr.pairs_with_delta_total(r + 1)) {
        for (uint32_t h = 0; h < fr.m; ++h) {
            bool have = false;
            Rational value;
            for (uint32_t i = 0; i < fr.d(); ++i) {
                if (bigD[i] == 0) continue;
                for (uint32_t j = 0; j < fr.l; ++j) {
                    Rational c = Q.coeff(QKey{*bigD.shifted_down(i), bigL.shifted_up(j), i, j, h});
                    if (!have) {
                        value = c;
                        have = true;
                    } else if (!(c == value)) {
                        return std::nullopt;  // inconsistent choices: not in the image
                    }
                }
            }
            if (have && !value.is_zero()) out.v[HKey{bigD, bigL, h}] = value;
        }
    }
    return out;
}

jet::CartanVector PlaneFamily::value_at(const jet::JetModel& model, const RationalVector& point,
                                        uint32_t j) const {
    jet::CartanVector v = model.zero_vector();
    auto at = [&](uint32_t var) { return point[var]; };
    for (size_t i = 0; i < v.a.size(); ++i) v.a[i] = a_polys[j][i].eval(at);
    for (size_t i = 0; i < v.p.size(); ++i) v.p[i] = p_polys[j][i].eval(at);
    return v;
}

jet::CartanVector PlaneFamily::derivative_at(const jet::JetModel& model,
                                             const RationalVector& point,
                                             const RationalVector& tangent, uint32_t j) const {
    jet::CartanVector v = model.zero_vector();
    auto at = [&](uint32_t var) { return point[var]; };
    auto directional = [&](const Poly& p) {
        Rational acc;
        for (size_t c = 0; c < tangent.size(); ++c) {
            if (tangent[c].is_zero()) continue;
            Poly d = p.derivative(static_cast<uint32_t>(c));
            if (!d.is_zero()) acc += tangent[c] * d.eval(at);
        }
        return acc;
    };
    for (size_t i = 0; i < v.a.size(); ++i) v.a[i] = directional(a_polys[j][i]);
    for (size_t i = 0; i < v.p.size(); ++i) v.p[i] = directional(p_polys[j][i]);
    return v;
}

PlaneFamily integral_plane_family(const Frame& fr, const CoeffMap& lift) {
    Chart full(fr, ChartKind::Adapted, fr.degree());
    PlaneFamily fam;
    fam.chart = std::make_shared<Chart>(fr, ChartKind::Adapted, fr.k);
    auto table = frames::u_in_terms_of_v(full);

    std::map<uint32_t, Poly> subst;
    for (const HKey& key : full.fiber_keys()) {
        uint32_t var = full.fiber_var(key.delta, key.lambda, key.h);
        if (key.delta.total() <= fr.k) {
            subst[var] = Poly::variable(fam.chart->fiber_var(key.delta, key.lambda, key.h));
        } else {
            auto it = lift.find(key);
            subst[var] = it == lift.end() ? Poly() : Poly(it->second);
        }
    }
    std::map<HKey, Poly, HKeyLess> u_expr;
    for (const auto& [key, poly] : table) u_expr[key] = poly.substituted(subst);
    auto u_of = [&](const MultiIndex& delta, const MultiIndex& lambda, uint32_t h) {
        auto it = u_expr.find(HKey{delta, lambda, h});
        return it == u_expr.end() ? Poly() : it->second;
    };

    jet::JetModel model = jet::JetModel::at_origin(fr);
    const auto& tops = model.sigmas_top();
    const uint32_t n = fr.n, d = fr.d(), l = fr.l, m = fr.m;
    auto split = [&](const MultiIndex& rho) {
        std::vector<uint32_t> de(rho.entries().begin(), rho.entries().begin() + d);
        std::vector<uint32_t> le(rho.entries().begin() + d, rho.entries().end());
        return std::pair<MultiIndex, MultiIndex>{MultiIndex(std::move(de)),
                                                 MultiIndex(std::move(le))};
    };

    for (uint32_t j = 0; j < l; ++j) {
        std::vector<Poly> a(n), p(tops.size() * m);
        a[d + j] = Poly(Rational(1));
        for (uint32_t i = 0; i < d; ++i) a[i] = Poly::variable(fam.chart->a_var(i, j));
        for (size_t t = 0; t < tops.size(); ++t) {
            for (uint32_t h = 0; h < m; ++h) {
                auto [dd, ll] = split(tops[t].shifted_up(d + j));
                Poly acc = u_of(dd, ll, h);
                for (uint32_t i = 0; i < d; ++i) {
                    auto [d2, l2] = split(tops[t].shifted_up(i));
                    Poly term = u_of(d2, l2, h);
                    if (!term.is_zero())
                        acc += Poly::variable(fam.chart->a_var(i, j)) * term;
                }
                p[t * m + h] = acc;
            }
        }
        fam.a_polys.push_back(std::move(a));
        fam.p_polys.push_back(std::move(p));
    }
    return fam;
}

PolarReport verify_polar(const Frame& fr, uint64_t seed, uint32_t samples) {
    PolarReport report;
    SplitMix64 rng(seed);
    jet::JetModel model = jet::JetModel::at_origin(fr);

    // two lifts of the level-k chart to the flag space
    CoeffMap lift_zero;
    CoeffMap lift_rand;
    for (const auto& [delta, lambda] : fr.pairs_with_delta_total(fr.degree())) {
        for (uint32_t h = 0; h < fr.m; ++h) {
            Rational c = rng.small_rational();
            if (!c.is_zero()) lift_rand[HKey{delta, lambda, h}] = c;
        }
    }
    PlaneFamily famA = integral_plane_family(fr, lift_zero);
    PlaneFamily famB = integral_plane_family(fr, lift_rand);

    ReducedFrame red = reduced_distribution_basis(fr, fr.k);
    const Chart& chart = *red.chart;
    const size_t dim = chart.var_count();

    auto fail = [&](const std::string& msg) {
        report.ok = false;
        if (report.failures.size() < 16) report.failures.push_back(msg);
    };

    for (uint32_t s = 0; s < samples; ++s) {
        ++report.samples;
        RationalVector point(dim);
        for (auto& c : point) c = rng.small_rational();

        std::vector<jet::CartanVector> L, L2;
        for (uint32_t j = 0; j < fr.l; ++j) {
            L.push_back(famA.value_at(model, point, j));
            L2.push_back(famB.value_at(model, point, j));
        }
        if (!(L == L2)) fail("integral element depends on the lift");
        if (!model.is_integral(L) || !model.is_horizontal(L))
            fail("chart point maps outside the integral elements");

        std::vector<RationalVector> span;
        for (const auto& f : red.fields) span.push_back(frames::eval_at(f, point));

        // tangent vectors to test: the reduced frame itself, random members,
        // random perturbations, and verticals below the top weight
        std::vector<std::pair<RationalVector, int>> tangents;  // vector, expect (-1 unknown, 1 member)
        for (const auto& v : span) tangents.push_back({v, 1});
        for (int t = 0; t < 2; ++t) {
            RationalVector w(dim);
            for (const auto& v : span) {
                Rational c = rng.small_rational();
                for (size_t idx = 0; idx < dim; ++idx) w[idx] += c * v[idx];
            }
            tangents.push_back({std::move(w), 1});
        }
        {
            // verticals with |delta| < k move the fiber polynomial out of the
            // second filtration stage; never polar
            std::vector<uint32_t> below;
            for (const HKey& key : chart.fiber_keys()) {
                if (key.delta.total() < fr.k)
                    below.push_back(chart.fiber_var(key.delta, key.lambda, key.h));
            }
            for (int t = 0; t < 3 && !below.empty(); ++t) {
                RationalVector w(dim);
                w[below[rng.next_u64() % below.size()]] = rng.nonzero_rational();
                tangents.push_back({std::move(w), 0});
            }
            for (int t = 0; t < 2; ++t) {
                RationalVector w(dim);
                for (auto& c : w) c = rng.small_rational();
                tangents.push_back({std::move(w), -1});
            }
        }

        bool derivative_compared = false;
        for (const auto& [w, expect] : tangents) {
            ++report.vectors_checked;
            bool tower_route = in_span(span, w);
            std::vector<jet::CartanVector> ldot;
            for (uint32_t j = 0; j < fr.l; ++j) ldot.push_back(famA.derivative_at(model, point, w, j));
            if (!derivative_compared) {
                derivative_compared = true;
                std::vector<jet::CartanVector> ldot2;
                for (uint32_t j = 0; j < fr.l; ++j)
                    ldot2.push_back(famB.derivative_at(model, point, w, j));
                if (!(ldot == ldot2)) fail("pushforward depends on the lift");
            }
            bool jet_route;
            try {
                jet_route = model.polar_membership(L, ldot);
            } catch (const std::invalid_argument&) {
                fail("pushforward violates the tangency condition");
                continue;
            }
            if (jet_route != tower_route) fail("tower and jet membership verdicts disagree");
            if (expect == 1 && !tower_route) fail("reduced frame vector not recognized as member");
            if (expect == 0 && tower_route) fail("low-weight vertical claimed as member");
            if (!jet_route) ++report.non_members_seen;
        }
    }
    if (report.non_members_seen == 0) fail("no non-member vectors were exercised");
    return report;
}

}  // namespace plab::tower

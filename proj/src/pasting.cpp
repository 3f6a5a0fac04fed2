#include "plab/pasting.hpp"

#include <stdexcept>

#include "expand.hpp"
#include "plab/rng.hpp"

namespace plab::pasting {

namespace {

uint32_t a_id(const Frame& fr, uint32_t i, uint32_t j) { return i * fr.l + j; }

}  // namespace

Poly Section::value(const MultiIndex& lambda, uint32_t h) const {
    auto it = values.find({lambda, h});
    return it == values.end() ? Poly() : it->second;
}

void Section::set_value(const MultiIndex& lambda, uint32_t h, Poly p) {
    if (lambda.dim() != frame.l || lambda.total() != frame.degree() || h >= frame.m)
        throw std::invalid_argument("Section: key outside the fiber grid");
    if (p.is_zero()) {
        values.erase({lambda, h});
    } else {
        values[{lambda, h}] = std::move(p);
    }
}

std::map<HKey, Poly, HKeyLess> adapted_coefficients_symbolic(const HomPoly& f) {
    const Frame& fr = f.frame();
    std::map<HKey, Poly, HKeyLess> out;
    for (const auto& [key, u] : f.coeffs()) {
        Poly pre(u / Rational(static_cast<long long>(key.delta.factorial() * key.lambda.factorial())));
        uint32_t h = key.h;
        detail::expand_shifted_power<Poly>(
            key.delta, key.lambda,
            [&](size_t i, size_t j) {
                return Poly::variable(a_id(fr, static_cast<uint32_t>(i), static_cast<uint32_t>(j)));
            },
            pre,
            [&](const MultiIndex& bd, const MultiIndex& bl, const Poly& c) {
                Poly add = c.scaled(Rational(static_cast<long long>(bd.factorial())));
                if (add.is_zero()) return;
                HKey vkey{bd, bl, h};
                auto it = out.find(vkey);
                if (it == out.end()) {
                    out[vkey] = add;
                } else {
                    it->second += add;
                }
            });
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    }
    return out;
}

Section section_from_jet(const HomPoly& f) {
    Section s;
    s.frame = f.frame();
    for (const auto& [key, poly] : adapted_coefficients_symbolic(f)) {
        if (key.delta.total() == 0) s.values[{key.lambda, key.h}] = poly;
    }
    return s;
}

bool graph_is_integral_leaf(const HomPoly& f) {
    const Frame& fr = f.frame();
    auto c = adapted_coefficients_symbolic(f);
    auto coeff_of = [&](const MultiIndex& delta, const MultiIndex& lambda, uint32_t h) {
        auto it = c.find(HKey{delta, lambda, h});
        return it == c.end() ? Poly() : it->second;
    };
    for (const auto& [delta, lambda] : fr.all_pairs()) {
        for (uint32_t h = 0; h < fr.m; ++h) {
            Poly self = coeff_of(delta, lambda, h);
            for (uint32_t i = 0; i < fr.d(); ++i) {
                for (uint32_t j = 0; j < fr.l; ++j) {
                    Poly lhs = self.derivative(a_id(fr, i, j));
                    Poly rhs = lambda[j] > 0
                                   ? coeff_of(delta.shifted_up(i), *lambda.shifted_down(j), h)
                                   : Poly();
                    if (!(lhs == rhs)) return false;
                }
            }
        }
    }
    return true;
}

std::vector<Violation> check_infinitesimal(const Section& s) {
    const Frame& fr = s.frame;
    std::vector<Violation> out;
    // cross-derivative equalities within a common reduced weight
    for (uint32_t i = 0; i < fr.d(); ++i) {
        for (const MultiIndex& mu : enumerate_multiindices(fr.l, fr.k)) {
            for (uint32_t j = 0; j < fr.l; ++j) {
                for (uint32_t j2 = j + 1; j2 < fr.l; ++j2) {
                    for (uint32_t h = 0; h < fr.m; ++h) {
                        Poly lhs = s.value(mu.shifted_up(j), h).derivative(a_id(fr, i, j));
                        Poly rhs = s.value(mu.shifted_up(j2), h).derivative(a_id(fr, i, j2));
                        if (!(lhs == rhs)) {
                            Violation v;
                            v.kind = 1;
                            v.i = i;
                            v.j = j;
                            v.j2 = j2;
                            v.h = h;
                            v.lambda = mu.shifted_up(j);
                            v.lambda2 = mu.shifted_up(j2);
                            out.push_back(std::move(v));
                        }
                    }
                }
            }
        }
    }
    // zero conditions where the derivative direction misses the weight
    for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
        for (uint32_t j = 0; j < fr.l; ++j) {
            if (lambda[j] != 0) continue;
            for (uint32_t i = 0; i < fr.d(); ++i) {
                for (uint32_t h = 0; h < fr.m; ++h) {
                    if (!s.value(lambda, h).derivative(a_id(fr, i, j)).is_zero()) {
                        Violation v;
                        v.kind = 2;
                        v.i = i;
                        v.j = j;
                        v.h = h;
                        v.lambda = lambda;
                        out.push_back(std::move(v));
                    }
                }
            }
        }
    }
    return out;
}

bool check_global(const Section& s, const PlaneCoords& A, const PlaneCoords& A2) {
    const Frame& fr = s.frame;
    if (A.d != fr.d() || A.l != fr.l || A2.d != fr.d() || A2.l != fr.l)
        throw std::invalid_argument("check_global: plane shape mismatch");
    // parametrize the intersection: sum_j (A - A2)_{i,j} x_j = 0
    RationalMatrix diff(fr.d(), fr.l);
    for (uint32_t i = 0; i < fr.d(); ++i)
        for (uint32_t j = 0; j < fr.l; ++j) diff.at(i, j) = A.at(i, j) - A2.at(i, j);
    std::vector<RationalVector> kernel = diff.nullspace();
    if (kernel.empty()) return true;  // the planes meet only at the origin

    auto eval_at = [&](const PlaneCoords& P, const Poly& p) {
        return p.eval([&](uint32_t var) { return P.a[var]; });
    };
    // substitute x_j = sum_s kernel[s][j] t_s into the difference polynomial
    for (uint32_t h = 0; h < fr.m; ++h) {
        Poly total;  // polynomial in the parameters t_s
        for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
            Rational c = eval_at(A, s.value(lambda, h)) - eval_at(A2, s.value(lambda, h));
            if (c.is_zero()) continue;
            Poly mono(c);
            for (uint32_t j = 0; j < fr.l; ++j) {
                Poly xj;
                for (size_t t = 0; t < kernel.size(); ++t) {
                    if (kernel[t][j].is_zero()) continue;
                    xj += Poly::variable(static_cast<uint32_t>(t)).scaled(kernel[t][j]);
                }
                for (uint32_t e = 0; e < lambda[j]; ++e) mono *= xj;
            }
            total += mono;
        }
        if (!total.is_zero()) return false;
    }
    return true;
}

GlueResult glue(const Section& s) {
    const Frame& fr = s.frame;
    // column order: divided-power coefficients of the unknown polynomial
    std::vector<HKey> cols;
    for (const auto& [delta, lambda] : fr.all_pairs())
        for (uint32_t h = 0; h < fr.m; ++h) cols.push_back(HKey{delta, lambda, h});
    std::map<HKey, size_t, HKeyLess> col_of;
    for (size_t c = 0; c < cols.size(); ++c) col_of[cols[c]] = c;

    // restriction rows, symbolic in A: for each unknown basis coefficient the
    // x^lambda coefficient of its restriction to the plane
    std::map<HKey, std::map<std::pair<MultiIndex, uint32_t>, Poly>, HKeyLess> restriction;
    for (const auto& [delta, lambda] : fr.all_pairs()) {
        HomPoly basis(fr);
        basis.set_coeff(delta, lambda, 0, Rational(1));
        Section bs = section_from_jet(basis);
        for (uint32_t h = 0; h < fr.m; ++h) {
            std::map<std::pair<MultiIndex, uint32_t>, Poly> per;
            for (const auto& [key, poly] : bs.values) per[{key.first, 0}] = poly;
            restriction[HKey{delta, lambda, h}] = per;
        }
    }

    SplitMix64 rng(0x9e1c5eedULL ^ (uint64_t(fr.n) << 24) ^ (uint64_t(fr.m) << 16) ^
                   (uint64_t(fr.k) << 8) ^ fr.l);
    RationalMatrix M(0, cols.size());
    RationalVector rhs;
    const size_t max_directions = cols.size() + 4;
    bool full_rank = false;
    for (size_t r = 0; r < max_directions && !full_rank; ++r) {
        PlaneCoords U(fr.d(), fr.l);
        for (auto& c : U.a) c = Rational(rng.range(-3, 3));
        for (uint32_t t = 0; t <= fr.degree() + 1; ++t) {
            PlaneCoords At(fr.d(), fr.l);
            for (size_t c = 0; c < At.a.size(); ++c) At.a[c] = Rational((long long)t) * U.a[c];
            auto at_plane = [&](const Poly& p) {
                return p.eval([&](uint32_t var) { return At.a[var]; });
            };
            for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
                for (uint32_t h = 0; h < fr.m; ++h) {
                    RationalVector row(cols.size());
                    for (const auto& [ukey, per] : restriction) {
                        if (ukey.h != h) continue;
                        auto it = per.find({lambda, 0});
                        if (it == per.end()) continue;
                        Rational c = at_plane(it->second);
                        if (!c.is_zero()) row[col_of.at(ukey)] = c;
                    }
                    M.append_row(row);
                    rhs.push_back(at_plane(s.value(lambda, h)));
                }
            }
        }
        full_rank = M.rank() == cols.size();
    }
    GlueResult out;
    if (!full_rank) {
        out.status = GlueResult::Status::InsufficientRank;
        return out;
    }
    auto sol = M.solve(rhs);
    if (!sol) {
        out.status = GlueResult::Status::NotHolonomic;
        return out;
    }
    HomPoly f(fr);
    for (size_t c = 0; c < cols.size(); ++c)
        f.set_coeff(cols[c].delta, cols[c].lambda, cols[c].h, (*sol)[c]);
    if (!(section_from_jet(f) == s)) {
        out.status = GlueResult::Status::NotHolonomic;
        return out;
    }
    out.status = GlueResult::Status::Glued;
    out.f = std::move(f);
    return out;
}

bool first_jet_in_equation(const Section& s, const PlaneCoords& A) {
    const Frame& fr = s.frame;
    auto at_plane = [&](const Poly& p) { return p.eval([&](uint32_t var) { return A.a[var]; }); };
    CoeffMap v;
    for (const auto& [key, poly] : s.values) {
        Rational c = at_plane(poly);
        if (!c.is_zero()) v[HKey{MultiIndex::zeros(fr.d()), key.first, key.second}] = c;
    }
    tower::QCoefficients Q;
    Q.base = tower::make_tower_point(fr, 0, A, std::move(v));
    for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
        for (uint32_t i = 0; i < fr.d(); ++i) {
            for (uint32_t j = 0; j < fr.l; ++j) {
                for (uint32_t h = 0; h < fr.m; ++h) {
                    Rational c = at_plane(s.value(lambda, h).derivative(a_id(fr, i, j)));
                    if (!c.is_zero())
                        Q.C[tower::QKey{MultiIndex::zeros(fr.d()), lambda, i, j, h}] = c;
                }
            }
        }
    }
    return tower::is_integral_plane(Q);
}

tower::ConstraintSystem infinitesimal_constraints(const Frame& fr) {
    tower::ConstraintSystem out;
    for (const auto& [delta, lambda] : fr.pairs_with_delta_total(0)) {
        for (uint32_t i = 0; i < fr.d(); ++i)
            for (uint32_t j = 0; j < fr.l; ++j)
                for (uint32_t h = 0; h < fr.m; ++h)
                    out.columns.push_back(tower::QKey{delta, lambda, i, j, h});
    }
    std::map<tower::QKey, size_t, tower::QKeyLess> idx;
    for (size_t c = 0; c < out.columns.size(); ++c) idx[out.columns[c]] = c;
    out.M = RationalMatrix(0, out.columns.size());
    const MultiIndex zero = MultiIndex::zeros(fr.d());

    // cross-derivative equalities
    for (uint32_t i = 0; i < fr.d(); ++i) {
        for (const MultiIndex& mu : enumerate_multiindices(fr.l, fr.k)) {
            for (uint32_t j = 0; j < fr.l; ++j) {
                for (uint32_t j2 = j + 1; j2 < fr.l; ++j2) {
                    for (uint32_t h = 0; h < fr.m; ++h) {
                        size_t c1 = idx.at(tower::QKey{zero, mu.shifted_up(j), i, j, h});
                        size_t c2 = idx.at(tower::QKey{zero, mu.shifted_up(j2), i, j2, h});
                        RationalVector row(out.columns.size());
                        row[std::min(c1, c2)] = Rational(1);
                        row[std::max(c1, c2)] = Rational(-1);
                        out.M.append_row(row);
                    }
                }
            }
        }
    }
    // zero conditions
    for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
        for (uint32_t j = 0; j < fr.l; ++j) {
            if (lambda[j] != 0) continue;
            for (uint32_t i = 0; i < fr.d(); ++i) {
                for (uint32_t h = 0; h < fr.m; ++h) {
                    RationalVector row(out.columns.size());
                    row[idx.at(tower::QKey{zero, lambda, i, j, h})] = Rational(1);
                    out.M.append_row(row);
                }
            }
        }
    }
    return out;
}

}  // namespace plab::pasting

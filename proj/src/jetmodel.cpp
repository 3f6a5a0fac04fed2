#include "plab/jetmodel.hpp"

#include <stdexcept>

#include "plab/poly.hpp"

namespace plab::jet {

Rational JetPoint::coord(const MultiIndex& sigma, uint32_t h) const {
    auto it = u.find({sigma, h});
    return it == u.end() ? Rational(0) : it->second;
}

void JetPoint::set_coord(const MultiIndex& sigma, uint32_t h, const Rational& c) {
    if (sigma.dim() != n || h >= m || sigma.total() > order)
        throw std::invalid_argument("JetPoint: coordinate outside the chart");
    if (c.is_zero()) {
        u.erase({sigma, h});
    } else {
        u[{sigma, h}] = c;
    }
}

bool SymValue::is_zero() const {
    for (const auto& v : c) {
        if (!v.is_zero()) return false;
    }
    return true;
}

JetModel::JetModel(const Frame& frame, JetPoint theta) : frame_(frame), theta_(std::move(theta)) {
    if (theta_.n != frame_.n || theta_.m != frame_.m || theta_.order != frame_.k)
        throw std::invalid_argument("JetModel: base jet does not match the frame");
    sig_top_ = enumerate_multiindices(frame_.n, frame_.k);
    sig_sub_ = enumerate_multiindices(frame_.n, frame_.k - 1);
    for (size_t i = 0; i < sig_top_.size(); ++i) top_idx_[sig_top_[i]] = i;
    for (size_t i = 0; i < sig_sub_.size(); ++i) sub_idx_[sig_sub_[i]] = i;
}

JetModel JetModel::at_origin(const Frame& frame) {
    JetPoint theta;
    theta.n = frame.n;
    theta.m = frame.m;
    theta.order = frame.k;
    theta.x.assign(frame.n, Rational(0));
    return JetModel(frame, std::move(theta));
}

CartanVector JetModel::zero_vector() const {
    CartanVector v;
    v.a.assign(frame_.n, Rational(0));
    v.p.assign(sig_top_.size() * frame_.m, Rational(0));
    return v;
}

CartanVector JetModel::d_vector(uint32_t i) const {
    CartanVector v = zero_vector();
    v.a[i] = Rational(1);
    return v;
}

CartanVector JetModel::vertical_vector(const MultiIndex& sigma, uint32_t h) const {
    CartanVector v = zero_vector();
    v.p[top_flat(top_idx_.at(sigma), h)] = Rational(1);
    return v;
}

RationalVector JetModel::flatten(const CartanVector& v) const {
    RationalVector out = v.a;
    out.insert(out.end(), v.p.begin(), v.p.end());
    return out;
}

CartanVector JetModel::unflatten(const RationalVector& v) const {
    if (v.size() != cartan_dim()) throw std::invalid_argument("unflatten: wrong size");
    CartanVector out;
    out.a.assign(v.begin(), v.begin() + frame_.n);
    out.p.assign(v.begin() + frame_.n, v.end());
    return out;
}

SymValue JetModel::metasymplectic(const CartanVector& v, const CartanVector& w) const {
    if (v.a.size() != frame_.n || w.a.size() != frame_.n ||
        v.p.size() != sig_top_.size() * frame_.m || w.p.size() != v.p.size())
        throw std::invalid_argument("metasymplectic: vector shape mismatch");
    SymValue out;
    out.c.assign(sig_sub_.size() * frame_.m, Rational(0));
    for (size_t s = 0; s < sig_sub_.size(); ++s) {
        for (uint32_t i = 0; i < frame_.n; ++i) {
            size_t t = top_idx_.at(sig_sub_[s].shifted_up(i));
            for (uint32_t h = 0; h < frame_.m; ++h) {
                const Rational& pv = v.p[top_flat(t, h)];
                const Rational& pw = w.p[top_flat(t, h)];
                if (pv.is_zero() && pw.is_zero()) continue;
                out.c[s * frame_.m + h] += pv * w.a[i] - pw * v.a[i];
            }
        }
    }
    return out;
}

bool JetModel::is_integral(const std::vector<CartanVector>& vectors) const {
    for (size_t i = 0; i < vectors.size(); ++i) {
        for (size_t j = i + 1; j < vectors.size(); ++j) {
            if (!metasymplectic(vectors[i], vectors[j]).is_zero()) return false;
        }
    }
    return true;
}

bool JetModel::is_horizontal(const std::vector<CartanVector>& vectors) const {
    std::vector<RationalVector> rows;
    for (const auto& v : vectors) rows.push_back(v.a);
    return span_rank(rows, frame_.n) == vectors.size();
}

std::vector<CartanVector> JetModel::r_plane(const JetPoint& theta_ext) const {
    if (theta_ext.order != frame_.k + 1)
        throw std::invalid_argument("r_plane: expected an order-(k+1) extension");
    std::vector<CartanVector> basis;
    for (uint32_t i = 0; i < frame_.n; ++i) {
        CartanVector v = d_vector(i);
        for (size_t t = 0; t < sig_top_.size(); ++t) {
            MultiIndex rho = sig_top_[t].shifted_up(i);
            for (uint32_t h = 0; h < frame_.m; ++h) v.p[top_flat(t, h)] = theta_ext.coord(rho, h);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<RationalVector> JetModel::polar_space(const std::vector<CartanVector>& L) const {
    // rows: for each basis vector w of L and each (tau, h), Omega(v, w)^h_tau = 0
    RationalMatrix m(0, cartan_dim());
    for (const auto& w : L) {
        for (size_t s = 0; s < sig_sub_.size(); ++s) {
            for (uint32_t h = 0; h < frame_.m; ++h) {
                RationalVector row(cartan_dim());
                for (uint32_t i = 0; i < frame_.n; ++i) {
                    size_t t = top_idx_.at(sig_sub_[s].shifted_up(i));
                    // p^h_{tau+1_i}(v) * a_i(w) - p^h_{tau+1_i}(w) * a_i(v)
                    row[frame_.n + top_flat(t, h)] += w.a[i];
                    row[i] -= w.p[top_flat(t, h)];
                }
                bool nonzero = false;
                for (const auto& e : row) {
                    if (!e.is_zero()) {
                        nonzero = true;
                        break;
                    }
                }
                if (nonzero) m.append_row(row);
            }
        }
    }
    if (m.rows() == 0) {
        std::vector<RationalVector> all;
        for (size_t i = 0; i < cartan_dim(); ++i) {
            RationalVector e(cartan_dim());
            e[i] = Rational(1);
            all.push_back(std::move(e));
        }
        return all;
    }
    return m.nullspace();
}

bool JetModel::polar_membership(const std::vector<CartanVector>& L,
                                const std::vector<CartanVector>& ldot) const {
    if (ldot.size() != L.size())
        throw std::invalid_argument("polar_membership: one image per basis vector required");
    if (!is_integral(L)) throw std::invalid_argument("polar_membership: L is not integral");
    // tangency to the space of integral elements: Omega(l_s, ldot(l_t)) must
    // be symmetric in (s, t)
    const size_t q = L.size();
    std::vector<SymValue> pairing(q * q);
    for (size_t s = 0; s < q; ++s) {
        for (size_t t = 0; t < q; ++t) pairing[s * q + t] = metasymplectic(L[s], ldot[t]);
    }
    for (size_t s = 0; s < q; ++s) {
        for (size_t t = s + 1; t < q; ++t) {
            if (!(pairing[s * q + t] == pairing[t * q + s]))
                throw std::invalid_argument(
                    "polar_membership: images violate the tangency condition");
        }
    }
    for (const auto& v : pairing) {
        if (!v.is_zero()) return false;
    }
    return true;
}

MultiIndex JetModel::join(const MultiIndex& delta, const MultiIndex& lambda) {
    std::vector<uint32_t> e = delta.entries();
    e.insert(e.end(), lambda.entries().begin(), lambda.entries().end());
    return MultiIndex(std::move(e));
}

std::pair<MultiIndex, MultiIndex> JetModel::split(const MultiIndex& sigma, uint32_t d) {
    std::vector<uint32_t> de(sigma.entries().begin(), sigma.entries().begin() + d);
    std::vector<uint32_t> le(sigma.entries().begin() + d, sigma.entries().end());
    return {MultiIndex(std::move(de)), MultiIndex(std::move(le))};
}

JetPoint JetModel::extend(const HomPoly& f) const {
    if (!(f.frame() == frame_)) throw std::invalid_argument("extend: frame mismatch");
    JetPoint ext = theta_;
    ext.order = frame_.k + 1;
    for (const auto& [key, c] : f.coeffs()) {
        ext.set_coord(join(key.delta, key.lambda), key.h, c);
    }
    return ext;
}

HomPoly JetModel::top_polynomial(const JetPoint& theta_ext) const {
    if (theta_ext.order != frame_.k + 1)
        throw std::invalid_argument("top_polynomial: expected an order-(k+1) extension");
    HomPoly f(frame_);
    for (const auto& [key, c] : theta_ext.u) {
        if (key.first.total() != frame_.degree()) continue;
        auto [delta, lambda] = split(key.first, frame_.d());
        f.set_coeff(delta, lambda, key.second, c);
    }
    return f;
}

std::pair<PlaneCoords, HomPoly> JetModel::flag_decompose(const std::vector<CartanVector>& L,
                                                         const std::vector<CartanVector>& R) const {
    const uint32_t n = frame_.n, l = frame_.l, d = frame_.d();
    if (R.size() != n) throw std::invalid_argument("flag_decompose: R must have n vectors");
    if (L.size() != l) throw std::invalid_argument("flag_decompose: L must have l vectors");
    if (!is_integral(R) || !is_horizontal(R))
        throw std::invalid_argument("flag_decompose: R is not a horizontal integral n-plane");

    // normalize R to total-derivative form: rows with a-part = identity
    RationalMatrix ra(n, n);
    for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c = 0; c < n; ++c) ra.at(c, r) = R[r].a[c];  // columns are basis vectors
    std::vector<CartanVector> C(n, zero_vector());
    for (uint32_t i = 0; i < n; ++i) {
        RationalVector ei(n);
        ei[i] = Rational(1);
        auto combo = ra.solve(ei);
        if (!combo) throw std::invalid_argument("flag_decompose: R is not horizontal");
        CartanVector v = zero_vector();
        for (uint32_t r = 0; r < n; ++r) {
            if ((*combo)[r].is_zero()) continue;
            for (uint32_t c = 0; c < n; ++c) v.a[c] += (*combo)[r] * R[r].a[c];
            for (size_t c = 0; c < v.p.size(); ++c) v.p[c] += (*combo)[r] * R[r].p[c];
        }
        C[i] = std::move(v);
    }

    // read the order-(k+1) coordinates off the normalized basis; integrality
    // of R makes the read-off consistent
    JetPoint ext = theta_;
    ext.order = frame_.k + 1;
    for (const MultiIndex& rho : enumerate_multiindices(n, frame_.k + 1)) {
        uint32_t i = 0;
        while (rho[i] == 0) ++i;
        size_t t = top_idx_.at(*rho.shifted_down(i));
        for (uint32_t h = 0; h < frame_.m; ++h) ext.set_coord(rho, h, C[i].p[top_flat(t, h)]);
    }
    for (uint32_t i = 0; i < n; ++i) {
        for (size_t t = 0; t < sig_top_.size(); ++t) {
            for (uint32_t h = 0; h < frame_.m; ++h) {
                if (!(C[i].p[top_flat(t, h)] == ext.coord(sig_top_[t].shifted_up(i), h)))
                    throw std::invalid_argument("flag_decompose: inconsistent top components");
            }
        }
    }

    // membership L c R
    std::vector<RationalVector> rflat;
    for (const auto& v : R) rflat.push_back(flatten(v));
    for (const auto& w : L) {
        if (!in_span(rflat, flatten(w)))
            throw std::invalid_argument("flag_decompose: L is not contained in R");
    }

    // chart coordinates of the projection of L: normalize the projected basis
    // so that vector j reads x*_j + sum_i A_{i,j} y*_i
    RationalMatrix xblock(l, l);
    for (uint32_t j = 0; j < l; ++j)
        for (uint32_t c = 0; c < l; ++c) xblock.at(c, j) = L[j].a[d + c];
    PlaneCoords A(d, l);
    std::vector<RationalVector> lflat;
    for (const auto& w : L) lflat.push_back(flatten(w));
    if (span_rank(lflat, cartan_dim()) != l)
        throw std::invalid_argument("flag_decompose: L basis is degenerate");
    for (uint32_t j = 0; j < l; ++j) {
        RationalVector ej(l);
        ej[j] = Rational(1);
        auto combo = xblock.solve(ej);
        if (!combo)
            throw std::invalid_argument("flag_decompose: projection of L is out of the chart");
        // verify the solved combination reproduces e_j exactly (solve() also
        // succeeds on consistent singular systems)
        RationalVector check(l);
        for (uint32_t r = 0; r < l; ++r)
            for (uint32_t c = 0; c < l; ++c) check[c] += (*combo)[r] * L[r].a[d + c];
        if (!(check == ej))
            throw std::invalid_argument("flag_decompose: projection of L is out of the chart");
        for (uint32_t i = 0; i < d; ++i) {
            Rational acc;
            for (uint32_t r = 0; r < l; ++r) acc += (*combo)[r] * L[r].a[i];
            A.at(i, j) = acc;
        }
    }
    return {A, top_polynomial(ext)};
}

Flag JetModel::flag_compose(const PlaneCoords& A, const HomPoly& f) const {
    if (A.d != frame_.d() || A.l != frame_.l)
        throw std::invalid_argument("flag_compose: plane shape mismatch");
    Flag flag;
    flag.R = r_plane(extend(f));
    for (uint32_t j = 0; j < frame_.l; ++j) {
        CartanVector w = flag.R[frame_.d() + j];
        for (uint32_t i = 0; i < frame_.d(); ++i) {
            const Rational& aij = A.at(i, j);
            if (aij.is_zero()) continue;
            for (uint32_t c = 0; c < frame_.n; ++c) w.a[c] += aij * flag.R[i].a[c];
            for (size_t c = 0; c < w.p.size(); ++c) w.p[c] += aij * flag.R[i].p[c];
        }
        flag.L.push_back(std::move(w));
    }
    return flag;
}

BracketCheckReport curvature_bracket_check(const JetPoint& theta) {
    BracketCheckReport report;
    const uint32_t n = theta.n, m = theta.m, k = theta.order;
    if (k < 1) throw std::invalid_argument("curvature_bracket_check: order must be >= 1");
    std::vector<MultiIndex> sig_top = enumerate_multiindices(n, k);
    std::vector<MultiIndex> sig_sub = enumerate_multiindices(n, k - 1);
    std::map<MultiIndex, size_t> top_idx, sub_idx;
    for (size_t i = 0; i < sig_top.size(); ++i) top_idx[sig_top[i]] = i;
    for (size_t i = 0; i < sig_sub.size(); ++i) sub_idx[sig_sub[i]] = i;

    // the coordinate rules of the metasymplectic pairing on (a | p) vectors
    auto pairing = [&](const RationalVector& va, const RationalVector& vp,
                       const RationalVector& wa, const RationalVector& wp) {
        RationalVector out(sig_sub.size() * m);
        for (size_t s = 0; s < sig_sub.size(); ++s) {
            for (uint32_t i = 0; i < n; ++i) {
                size_t t = top_idx.at(sig_sub[s].shifted_up(i));
                for (uint32_t h = 0; h < m; ++h) {
                    out[s * m + h] += vp[t * m + h] * wa[i] - wp[t * m + h] * va[i];
                }
            }
        }
        return out;
    };

    // symbolic chart: vars x_0..x_{n-1}, then u(sigma, h) for |sigma| <= k
    std::vector<MultiIndex> sig_all;
    for (uint32_t t = 0; t <= k; ++t) {
        auto part = enumerate_multiindices(n, t);
        sig_all.insert(sig_all.end(), part.begin(), part.end());
    }
    std::map<MultiIndex, size_t> sig_pos;
    for (size_t i = 0; i < sig_all.size(); ++i) sig_pos[sig_all[i]] = i;
    auto uvar = [&](const MultiIndex& sigma, uint32_t h) {
        return static_cast<uint32_t>(n + sig_pos.at(sigma) * m + h);
    };

    const size_t pdim = sig_top.size() * m;
    // frame sections: total derivatives and top vertical fields
    std::vector<PolyMap> dfields(n);
    for (uint32_t i = 0; i < n; ++i) {
        PolyMap f;
        f[i] = Poly(Rational(1));
        for (const MultiIndex& sigma : sig_all) {
            if (sigma.total() > k - 1) continue;
            for (uint32_t h = 0; h < m; ++h)
                f[uvar(sigma, h)] = Poly::variable(uvar(sigma.shifted_up(i), h));
        }
        dfields[i] = std::move(f);
    }
    struct Section {
        std::string name;
        PolyMap field;
        RationalVector a, p;
    };
    std::vector<Section> sections;
    for (uint32_t i = 0; i < n; ++i) {
        RationalVector a(n), p(pdim);
        a[i] = Rational(1);
        sections.push_back({"D_" + std::to_string(i + 1), dfields[i], std::move(a), std::move(p)});
    }
    for (const MultiIndex& sigma : sig_top) {
        for (uint32_t h = 0; h < m; ++h) {
            PolyMap f;
            f[uvar(sigma, h)] = Poly(Rational(1));
            RationalVector a(n), p(pdim);
            p[top_idx.at(sigma) * m + h] = Rational(1);
            sections.push_back({"V_" + sigma.str() + "^" + std::to_string(h + 1), std::move(f),
                                std::move(a), std::move(p)});
        }
    }

    auto theta_value = [&](uint32_t var) -> Rational {
        if (var < n) return theta.x[var];
        size_t rest = var - n;
        return theta.coord(sig_all[rest / m], static_cast<uint32_t>(rest % m));
    };

    for (size_t s1 = 0; s1 < sections.size(); ++s1) {
        for (size_t s2 = s1 + 1; s2 < sections.size(); ++s2) {
            ++report.pairs_checked;
            PolyMap br = derivation_bracket(sections[s1].field, sections[s2].field);
            // evaluate at theta and reduce mod the Cartan plane: subtract
            // base components along D_i, drop top vertical components
            std::map<uint32_t, Rational> val;
            for (const auto& [var, comp] : br) {
                Rational c = comp.eval(theta_value);
                if (!c.is_zero()) val[var] = c;
            }
            for (uint32_t i = 0; i < n; ++i) {
                auto it = val.find(i);
                if (it == val.end()) continue;
                Rational c = it->second;
                for (const auto& [var, comp] : dfields[i]) {
                    Rational dv = comp.eval(theta_value);
                    if (dv.is_zero()) continue;
                    val[var] -= c * dv;
                    if (val[var].is_zero()) val.erase(var);
                }
            }
            RationalVector got(sig_sub.size() * m);
            bool representable = true;
            for (const auto& [var, c] : val) {
                if (var < n) {
                    representable = false;
                    break;
                }
                size_t rest = var - n;
                const MultiIndex& sigma = sig_all[rest / m];
                uint32_t h = static_cast<uint32_t>(rest % m);
                if (sigma.total() == k) continue;  // inside the Cartan plane
                if (sigma.total() != k - 1) {
                    representable = false;
                    break;
                }
                got[sub_idx.at(sigma) * m + h] = c;
            }
            RationalVector expected =
                pairing(sections[s1].a, sections[s1].p, sections[s2].a, sections[s2].p);
            if (!representable || !(got == expected)) {
                report.ok = false;
                report.failures.push_back("[" + sections[s1].name + ", " + sections[s2].name +
                                          "] does not reduce to the metasymplectic value");
            }
        }
    }
    return report;
}

size_t JetModel::integral_fiber_dim(const PlaneCoords& A) const {
    const uint32_t l = frame_.l, d = frame_.d(), m = frame_.m;
    // unknowns: vertical components P_j of the plane basis w_j, with the
    // D-components fixed by the chart point A
    std::vector<RationalVector> abase(l, RationalVector(frame_.n));
    for (uint32_t j = 0; j < l; ++j) {
        abase[j][d + j] = Rational(1);
        for (uint32_t i = 0; i < d; ++i) abase[j][i] = A.at(i, j);
    }
    const size_t pdim = sig_top_.size() * m;
    RationalMatrix cons(0, l * pdim);
    for (uint32_t j1 = 0; j1 < l; ++j1) {
        for (uint32_t j2 = j1 + 1; j2 < l; ++j2) {
            for (size_t s = 0; s < sig_sub_.size(); ++s) {
                for (uint32_t h = 0; h < m; ++h) {
                    RationalVector row(l * pdim);
                    for (uint32_t i = 0; i < frame_.n; ++i) {
                        size_t t = top_idx_.at(sig_sub_[s].shifted_up(i));
                        row[j1 * pdim + top_flat(t, h)] += abase[j2][i];
                        row[j2 * pdim + top_flat(t, h)] -= abase[j1][i];
                    }
                    cons.append_row(row);
                }
            }
        }
    }
    if (cons.rows() == 0) return l * pdim;
    return cons.nullspace().size();
}

}  // namespace plab::jet

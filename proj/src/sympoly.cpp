#include "plab/sympoly.hpp"

#include <stdexcept>

#include "expand.hpp"

namespace plab {

Frame::Frame(uint32_t n_, uint32_t m_, uint32_t k_, uint32_t l_) : n(n_), m(m_), l(l_), k(k_) {
    if (l < 1 || l >= n) throw std::invalid_argument("Frame: need 1 <= l < n");
    if (k < 1) throw std::invalid_argument("Frame: need k >= 1");
    if (m < 1) throw std::invalid_argument("Frame: need m >= 1");
}

std::vector<std::pair<MultiIndex, MultiIndex>> Frame::pairs_with_delta_total(uint32_t dtot) const {
    std::vector<std::pair<MultiIndex, MultiIndex>> out;
    if (dtot > degree()) return out;
    for (const MultiIndex& delta : enumerate_multiindices(d(), dtot)) {
        for (const MultiIndex& lambda : enumerate_multiindices(l, degree() - dtot)) {
            out.push_back({delta, lambda});
        }
    }
    return out;
}

std::vector<std::pair<MultiIndex, MultiIndex>> Frame::all_pairs() const {
    std::vector<std::pair<MultiIndex, MultiIndex>> out;
    for (uint32_t t = 0; t <= degree(); ++t) {
        auto part = pairs_with_delta_total(t);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

bool PlaneCoords::is_zero() const {
    for (const auto& c : a) {
        if (!c.is_zero()) return false;
    }
    return true;
}

HomPoly::HomPoly(const Frame& f, CoeffMap coeffs) : frame_(f), coeffs_(std::move(coeffs)) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        check_key(it->first);
        if (it->second.is_zero()) {
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
}

void HomPoly::check_key(const HKey& key) const {
    if (key.delta.dim() != frame_.d() || key.lambda.dim() != frame_.l || key.h >= frame_.m ||
        key.delta.total() + key.lambda.total() != frame_.degree()) {
        throw std::invalid_argument("HomPoly: key outside the frame's degree-(k+1) grid");
    }
}

Rational HomPoly::coeff(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h) const {
    auto it = coeffs_.find(HKey{delta, lambda, h});
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void HomPoly::set_coeff(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h,
                        const Rational& c) {
    HKey key{delta, lambda, h};
    check_key(key);
    if (c.is_zero()) {
        coeffs_.erase(key);
    } else {
        coeffs_[key] = c;
    }
}

void HomPoly::add_coeff(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h,
                        const Rational& c) {
    set_coeff(delta, lambda, h, coeff(delta, lambda, h) + c);
}

HomPoly operator+(const HomPoly& a, const HomPoly& b) {
    if (!(a.frame_ == b.frame_)) throw std::invalid_argument("HomPoly: frame mismatch");
    HomPoly r = a;
    for (const auto& [key, c] : b.coeffs_) r.add_coeff(key.delta, key.lambda, key.h, c);
    return r;
}

HomPoly operator-(const HomPoly& a, const HomPoly& b) { return a + b.scaled(Rational(-1)); }

HomPoly HomPoly::scaled(const Rational& c) const {
    HomPoly r(frame_);
    if (c.is_zero()) return r;
    for (const auto& [key, v] : coeffs_) r.coeffs_[key] = v * c;
    return r;
}

CoeffMap to_adapted(const HomPoly& f, const PlaneCoords& A) {
    const Frame& fr = f.frame();
    if (A.d != fr.d() || A.l != fr.l) throw std::invalid_argument("to_adapted: plane shape mismatch");
    CoeffMap v;
    for (const auto& [key, u] : f.coeffs()) {
        // monomial coefficient of y^delta x^lambda, then y_i = yt_i + sum A_{i,j} x_j
        Rational pre = u / Rational(static_cast<long long>(key.delta.factorial() * key.lambda.factorial()));
        uint32_t h = key.h;
        detail::expand_shifted_power<Rational>(
            key.delta, key.lambda, [&](size_t i, size_t j) { return A.at(i, j); }, pre,
            [&](const MultiIndex& bd, const MultiIndex& bl, const Rational& c) {
                HKey out{bd, bl, h};
                auto it = v.find(out);
                Rational add = c * Rational(static_cast<long long>(bd.factorial()));
                if (it == v.end()) {
                    if (!add.is_zero()) v[out] = add;
                } else {
                    it->second += add;
                    if (it->second.is_zero()) v.erase(it);
                }
            });
    }
    return v;
}

HomPoly from_adapted(const Frame& frame, const CoeffMap& vcoeffs, const PlaneCoords& A) {
    if (A.d != frame.d() || A.l != frame.l)
        throw std::invalid_argument("from_adapted: plane shape mismatch");
    HomPoly f(frame);
    for (const auto& [key, vc] : vcoeffs) {
        if (key.delta.total() + key.lambda.total() != frame.degree())
            throw std::invalid_argument("from_adapted: key of wrong degree");
        Rational pre = vc / Rational(static_cast<long long>(key.delta.factorial()));
        uint32_t h = key.h;
        detail::expand_shifted_power<Rational>(
            key.delta, key.lambda, [&](size_t i, size_t j) { return -A.at(i, j); }, pre,
            [&](const MultiIndex& bd, const MultiIndex& bl, const Rational& c) {
                f.add_coeff(bd, bl, h,
                            c * Rational(static_cast<long long>(bd.factorial() * bl.factorial())));
            });
    }
    return f;
}

uint32_t filtration_level(const HomPoly& f, const PlaneCoords& A) {
    CoeffMap v = to_adapted(f, A);
    if (v.empty()) return 0;
    uint64_t mx = 0;
    for (const auto& [key, c] : v) mx = std::max<uint64_t>(mx, key.lambda.total());
    return static_cast<uint32_t>(1 + mx);
}

std::map<std::pair<MultiIndex, uint32_t>, Rational> restrict_to_plane(const HomPoly& f,
                                                                       const PlaneCoords& A) {
    CoeffMap v = to_adapted(f, A);
    std::map<std::pair<MultiIndex, uint32_t>, Rational> out;
    for (const auto& [key, c] : v) {
        if (key.delta.total() == 0) out[{key.lambda, key.h}] = c;
    }
    return out;
}

NValuedPoly monomial_form(const HomPoly& f) {
    NValuedPoly p;
    p.frame = f.frame();
    p.degree = f.frame().degree();
    for (const auto& [key, u] : f.coeffs()) {
        p.mono[key] =
            u / Rational(static_cast<long long>(key.delta.factorial() * key.lambda.factorial()));
    }
    return p;
}

NValuedPoly directional_derivative(const NValuedPoly& p, const RVector& w) {
    if (p.degree == 0) {
        NValuedPoly z;
        z.frame = p.frame;
        z.degree = 0;
        return z;
    }
    NValuedPoly r;
    r.frame = p.frame;
    r.degree = p.degree - 1;
    auto add = [&](const HKey& key, const Rational& c) {
        if (c.is_zero()) return;
        auto it = r.mono.find(key);
        if (it == r.mono.end()) {
            r.mono[key] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) r.mono.erase(it);
        }
    };
    for (const auto& [key, c] : p.mono) {
        for (size_t i = 0; i < key.delta.dim(); ++i) {
            if (key.delta[i] == 0 || w.y_part[i].is_zero()) continue;
            add(HKey{*key.delta.shifted_down(i), key.lambda, key.h},
                c * Rational(static_cast<long long>(key.delta[i])) * w.y_part[i]);
        }
        for (size_t j = 0; j < key.lambda.dim(); ++j) {
            if (key.lambda[j] == 0 || w.x_part[j].is_zero()) continue;
            add(HKey{key.delta, *key.lambda.shifted_down(j), key.h},
                c * Rational(static_cast<long long>(key.lambda[j])) * w.x_part[j]);
        }
    }
    return r;
}

NValuedPoly iterated_derivative(const HomPoly& f, const std::vector<RVector>& vectors) {
    if (vectors.size() > f.frame().degree())
        throw std::invalid_argument("iterated_derivative: more derivatives than the degree");
    NValuedPoly p = monomial_form(f);
    for (const RVector& w : vectors) p = directional_derivative(p, w);
    return p;
}

std::vector<RVector> plane_basis(const Frame& frame, const PlaneCoords& A) {
    std::vector<RVector> basis;
    for (uint32_t j = 0; j < frame.l; ++j) {
        RVector w;
        w.y_part.assign(frame.d(), Rational(0));
        w.x_part.assign(frame.l, Rational(0));
        w.x_part[j] = Rational(1);
        for (uint32_t i = 0; i < frame.d(); ++i) w.y_part[i] = A.at(i, j);
        basis.push_back(std::move(w));
    }
    return basis;
}

uint64_t mu_dim(const Frame& frame, uint32_t p) {
    uint64_t acc = 0;
    for (uint32_t t = 0; t < p && t <= frame.degree(); ++t) {
        acc += multiindex_count(frame.l, t) * multiindex_count(frame.d(), frame.degree() - t);
    }
    return acc * frame.m;
}

}  // namespace plab

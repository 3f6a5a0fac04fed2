#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "plab/matrix.hpp"
#include "plab/multiindex.hpp"
#include "plab/rational.hpp"

namespace plab {

/// Dimensions of the whole construction: n independent and m dependent
/// directions, jet order k, and the dimension l of the distinguished
/// directions. All polynomials handled have homogeneous degree k+1 and are
/// written in covectors y_1..y_d (annihilator of the reference plane) and
/// x_1..x_l, valued in an m-dimensional normal space with basis e_1..e_m.
struct Frame {
    uint32_t n = 2, m = 1, l = 1, k = 1;

    Frame() = default;
    Frame(uint32_t n_, uint32_t m_, uint32_t k_, uint32_t l_);

    uint32_t d() const { return n - l; }
    uint32_t degree() const { return k + 1; }

    /// All (delta, lambda) with |delta| + |lambda| = k+1 and |delta| = dtot.
    std::vector<std::pair<MultiIndex, MultiIndex>> pairs_with_delta_total(uint32_t dtot) const;
    /// All (delta, lambda) with |delta| + |lambda| = k+1, graded by |delta|.
    std::vector<std::pair<MultiIndex, MultiIndex>> all_pairs() const;

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.n == b.n && a.m == b.m && a.l == b.l && a.k == b.k;
    }
};

/// Affine chart coordinates A_{i,j} of an l-plane: the covectors
/// y_i - sum_j A_{i,j} x_j span the plane's annihilator.
struct PlaneCoords {
    uint32_t d = 0, l = 0;
    std::vector<Rational> a;  // row-major d x l

    PlaneCoords() = default;
    PlaneCoords(uint32_t d_, uint32_t l_) : d(d_), l(l_), a(d_ * l_) {}
    Rational& at(uint32_t i, uint32_t j) { return a[i * l + j]; }
    const Rational& at(uint32_t i, uint32_t j) const { return a[i * l + j]; }
    bool is_zero() const;

    friend bool operator==(const PlaneCoords& x, const PlaneCoords& y) {
        return x.d == y.d && x.l == y.l && x.a == y.a;
    }
};

/// Key (delta, lambda, h) of a coefficient: exponents of the y- and x-blocks
/// plus the normal-direction index h (0-based).
struct HKey {
    MultiIndex delta, lambda;
    uint32_t h = 0;

    friend bool operator==(const HKey& a, const HKey& b) {
        return a.delta == b.delta && a.lambda == b.lambda && a.h == b.h;
    }
};

struct HKeyLess {
    bool operator()(const HKey& a, const HKey& b) const {
        if (a.delta != b.delta) return grlex_less(a.delta, b.delta);
        if (a.lambda != b.lambda) return grlex_less(a.lambda, b.lambda);
        return a.h < b.h;
    }
};

using CoeffMap = std::map<HKey, Rational, HKeyLess>;

/// Homogeneous degree-(k+1) polynomial map into the normal space, stored by
/// its coefficients with respect to the divided-power basis
/// (1/(delta! lambda!)) y^delta x^lambda (x) e_h. Zero coefficients are not
/// stored.
class HomPoly {
public:
    HomPoly() = default;
    explicit HomPoly(const Frame& f) : frame_(f) {}
    HomPoly(const Frame& f, CoeffMap coeffs);

    const Frame& frame() const { return frame_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coeff(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h) const;
    void set_coeff(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h, const Rational& c);
    void add_coeff(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h, const Rational& c);

    friend HomPoly operator+(const HomPoly& a, const HomPoly& b);
    friend HomPoly operator-(const HomPoly& a, const HomPoly& b);
    HomPoly scaled(const Rational& c) const;

    friend bool operator==(const HomPoly& a, const HomPoly& b) {
        return a.frame_ == b.frame_ && a.coeffs_ == b.coeffs_;
    }

private:
    Frame frame_;
    CoeffMap coeffs_;  // divided-power coefficients u^h_{delta,lambda}

    void check_key(const HKey& k) const;
};

/// Coefficients v^h_{delta,lambda} of a polynomial in the moving basis
/// (1/delta!) (y - sum A x)^delta x^lambda (x) e_h at the plane A.
CoeffMap to_adapted(const HomPoly& f, const PlaneCoords& A);

/// Inverse of to_adapted: rebuilds the polynomial from adapted coefficients.
HomPoly from_adapted(const Frame& frame, const CoeffMap& v, const PlaneCoords& A);

/// Smallest p with f in mu^p at the plane A: 0 for the zero polynomial, else
/// 1 + max |lambda| over the nonzero adapted coefficients. Ranges 0..k+2.
uint32_t filtration_level(const HomPoly& f, const PlaneCoords& A);

/// Substitutes y_i <- sum_j A_{i,j} x_j. Returns monomial coefficients on
/// x^lambda (x) e_h of the restricted degree-(k+1) polynomial.
std::map<std::pair<MultiIndex, uint32_t>, Rational> restrict_to_plane(const HomPoly& f,
                                                                       const PlaneCoords& A);

/// A vector of the base space written against the basis dual to (y, x).
struct RVector {
    RationalVector y_part;  // size d
    RationalVector x_part;  // size l
};

/// Homogeneous polynomial of any degree in (y, x), stored by plain monomial
/// coefficients; the result type of derivatives of a HomPoly.
struct NValuedPoly {
    Frame frame;
    uint32_t degree = 0;
    CoeffMap mono;  // monomial coefficients

    bool is_zero() const { return mono.empty(); }
    friend bool operator==(const NValuedPoly& a, const NValuedPoly& b) {
        return a.degree == b.degree && a.mono == b.mono;
    }
};

NValuedPoly monomial_form(const HomPoly& f);
NValuedPoly directional_derivative(const NValuedPoly& p, const RVector& w);
/// Exact directional derivatives applied in order; symmetric in the arguments.
NValuedPoly iterated_derivative(const HomPoly& f, const std::vector<RVector>& vectors);

/// Basis vectors of the plane with chart coordinates A: w_j = x*_j + sum_i A_{i,j} y*_i.
std::vector<RVector> plane_basis(const Frame& frame, const PlaneCoords& A);

/// dim mu^p at any plane: m * sum over |lambda| < p of the product of the
/// multi-index counts of the two blocks.
uint64_t mu_dim(const Frame& frame, uint32_t p);

}  // namespace plab

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "plab/matrix.hpp"
#include "plab/multiindex.hpp"
#include "plab/sympoly.hpp"

namespace plab::jet {

/// A point of the order-`order` jet chart: base coordinates x_i plus jet
/// coordinates u^h_sigma for |sigma| <= order (zeros not stored).
struct JetPoint {
    uint32_t n = 0, m = 0, order = 0;
    RationalVector x;  // size n
    std::map<std::pair<MultiIndex, uint32_t>, Rational> u;

    Rational coord(const MultiIndex& sigma, uint32_t h) const;
    void set_coord(const MultiIndex& sigma, uint32_t h, const Rational& c);

    friend bool operator==(const JetPoint& a, const JetPoint& b) {
        return a.n == b.n && a.m == b.m && a.order == b.order && a.x == b.x && a.u == b.u;
    }
};

/// A vector of the Cartan plane at the fixed jet, written against the basis
/// {D_i} (total derivatives) followed by {d/du^h_sigma, |sigma| = k}.
struct CartanVector {
    RationalVector a;  // size n
    RationalVector p;  // size m * #{|sigma| = k}, index sigma_idx * m + h

    friend bool operator==(const CartanVector& v, const CartanVector& w) {
        return v.a == w.a && v.p == w.p;
    }
};

/// Value of the curvature pairing: an element of S^{k-1}R*(x)N written on the
/// basis d/du^h_tau, |tau| = k-1 (equivalently divided monomials x^tau (x) e_h).
struct SymValue {
    RationalVector c;  // index tau_idx * m + h
    bool is_zero() const;

    friend bool operator==(const SymValue& a, const SymValue& b) { return a.c == b.c; }
};

struct Flag {
    std::vector<CartanVector> L;  // l vectors
    std::vector<CartanVector> R;  // n vectors, normalized total-derivative form
};

struct BracketCheckReport {
    bool ok = true;
    uint64_t pairs_checked = 0;
    std::vector<std::string> failures;
};

/// Symbolically brackets the frame sections {D_i} u {d/du_sigma, |sigma| = k}
/// of the Cartan distribution at the given jet, reduces each bracket mod the
/// distribution, and checks the classes against the coordinate rules of the
/// metasymplectic form. Works for any n >= 1.
BracketCheckReport curvature_bracket_check(const JetPoint& theta);

/// Classical jet-space model at a fixed jet of order k: the metasymplectic
/// structure in coordinates, integral elements, polar spaces, and the
/// flag <-> (plane chart, fiber polynomial) decomposition. Serves as the
/// independent oracle the tower construction is checked against.
class JetModel {
public:
    JetModel(const Frame& frame, JetPoint theta);
    /// Model at the zero jet.
    static JetModel at_origin(const Frame& frame);

    const Frame& frame() const { return frame_; }
    const JetPoint& theta() const { return theta_; }

    const std::vector<MultiIndex>& sigmas_top() const { return sig_top_; }
    const std::vector<MultiIndex>& sigmas_sub() const { return sig_sub_; }
    size_t cartan_dim() const { return frame_.n + sig_top_.size() * frame_.m; }

    CartanVector zero_vector() const;
    CartanVector d_vector(uint32_t i) const;                      // D_i direction
    CartanVector vertical_vector(const MultiIndex& sigma, uint32_t h) const;
    RationalVector flatten(const CartanVector& v) const;
    CartanVector unflatten(const RationalVector& v) const;

    /// The coordinate action of the curvature form of the Cartan distribution.
    SymValue metasymplectic(const CartanVector& v, const CartanVector& w) const;

    bool is_integral(const std::vector<CartanVector>& vectors) const;
    /// Transversal to the fibers over order k-1 (the D-components have full rank).
    bool is_horizontal(const std::vector<CartanVector>& vectors) const;

    /// The R-plane of an order-(k+1) extension of theta: the span of the n
    /// total derivatives with top components read from the extension.
    std::vector<CartanVector> r_plane(const JetPoint& theta_ext) const;

    /// Exact basis of the polar space { v : Omega(v, w) = 0 for all w in L }.
    std::vector<RationalVector> polar_space(const std::vector<CartanVector>& L) const;

    /// Does the tangent direction given by basis images ldot stay inside the
    /// polar space of L?  Rejects (throws std::invalid_argument) images that
    /// violate the symmetric tangency condition, i.e. are not tangent to the
    /// space of integral elements.
    bool polar_membership(const std::vector<CartanVector>& L,
                          const std::vector<CartanVector>& ldot) const;

    /// Splits an integral flag L c R into the plane chart coordinates of the
    /// projection of L and the fiber polynomial of the order-(k+1) extension
    /// defining R (relative to the zero origin extension).
    std::pair<PlaneCoords, HomPoly> flag_decompose(const std::vector<CartanVector>& L,
                                                   const std::vector<CartanVector>& R) const;
    Flag flag_compose(const PlaneCoords& A, const HomPoly& f) const;

    /// Order-(k+1) extension of theta with top coordinates from f.
    JetPoint extend(const HomPoly& f) const;
    /// Reads the fiber polynomial back off an order-(k+1) extension.
    HomPoly top_polynomial(const JetPoint& theta_ext) const;

    BracketCheckReport curvature_bracket_check() const { return jet::curvature_bracket_check(theta_); }

    /// Dimension of the space of horizontal integral l-planes over the plane
    /// chart point A (brute force: solve the linear integrality conditions on
    /// the vertical components at fixed A).
    size_t integral_fiber_dim(const PlaneCoords& A) const;

private:
    Frame frame_;
    JetPoint theta_;
    std::vector<MultiIndex> sig_top_;   // |sigma| = k
    std::vector<MultiIndex> sig_sub_;   // |sigma| = k-1
    std::map<MultiIndex, size_t> top_idx_, sub_idx_;

    size_t top_flat(size_t sigma_idx, uint32_t h) const { return sigma_idx * frame_.m + h; }
    /// Concatenated multi-index (delta over the first d slots, lambda over the rest).
    static MultiIndex join(const MultiIndex& delta, const MultiIndex& lambda);
    static std::pair<MultiIndex, MultiIndex> split(const MultiIndex& sigma, uint32_t d);
};

}  // namespace plab::jet

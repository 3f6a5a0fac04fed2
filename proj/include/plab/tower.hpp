#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plab/frames.hpp"
#include "plab/jetmodel.hpp"
#include "plab/matrix.hpp"
#include "plab/sympoly.hpp"

namespace plab::tower {

/// A point of the level-q space of the tower: plane coordinates plus the
/// adapted fiber coordinates with |delta| <= q. Level -1 carries the plane
/// coordinates alone; level k+1 is a point of the flag space.
struct TowerPoint {
    Frame frame;
    int level = -1;
    PlaneCoords A;
    CoeffMap v;

    friend bool operator==(const TowerPoint& a, const TowerPoint& b) {
        return a.frame == b.frame && a.level == b.level && a.A == b.A && a.v == b.v;
    }
};

TowerPoint make_tower_point(const Frame& frame, int level, PlaneCoords A, CoeffMap v);

/// Forgets the coordinates above the target level.
TowerPoint project(const TowerPoint& phi, int target_level);

/// Coefficient tensor of a horizontal plane at the base point: the plane is
/// spanned by D^[q]_{i,j} + sum over |delta| = q of C^{delta,lambda}_{i,j,h}
/// vertical directions, with q the base level.
struct QKey {
    MultiIndex delta, lambda;
    uint32_t i = 0, j = 0, h = 0;

    friend bool operator==(const QKey& a, const QKey& b) {
        return a.delta == b.delta && a.lambda == b.lambda && a.i == b.i && a.j == b.j && a.h == b.h;
    }
};

struct QKeyLess {
    bool operator()(const QKey& a, const QKey& b) const {
        if (!(a.delta == b.delta)) return grlex_less(a.delta, b.delta);
        if (!(a.lambda == b.lambda)) return grlex_less(a.lambda, b.lambda);
        if (a.i != b.i) return a.i < b.i;
        if (a.j != b.j) return a.j < b.j;
        return a.h < b.h;
    }
};

using QMap = std::map<QKey, Rational, QKeyLess>;

struct QCoefficients {
    TowerPoint base;  // level q
    QMap C;           // keys with |delta| = q, zeros not stored

    Rational coeff(const QKey& key) const;
};

/// The plane a level-q point projects to over its level-(q-1) shadow:
/// C^{delta,lambda}_{i,j,h} = v^h_{delta+1_i, lambda-1_j} when lambda_j > 0.
QCoefficients q_plane_of(const TowerPoint& phi);

/// Linear conditions on the coefficient tensor at a base level.
struct ConstraintSystem {
    std::vector<QKey> columns;
    RationalMatrix M;

    size_t column_of(const QKey& key) const;
    RationalVector coefficients_as_vector(const QMap& C) const;
    QMap vector_as_coefficients(const RationalVector& x) const;
};

/// Integrality of a horizontal plane inside the reduced distribution of the
/// given level (vacuous at level 0, where the distribution is everything).
ConstraintSystem integral_constraints(const Frame& frame, uint32_t level);

/// Conditions for a horizontal plane at the given level to arise as the
/// projected plane of a point one level up (defined for level <= k). At level
/// 0 these are exactly the infinitesimal pasting conditions; at level >= 1
/// they cut out the same planes as the integrality conditions.
ConstraintSystem prolongation_constraints(const Frame& frame, uint32_t level);

/// Integrality verdict. At base level >= 1 the index conditions are evaluated
/// and cross-checked against the vanishing of the reduced curvature computed
/// by Lie brackets; a disagreement throws. At level 0 every plane is integral
/// for the full tangent distribution, and the verdict reports membership in
/// the image of the level-1 points, i.e. the pasting conditions.
bool is_integral_plane(const QCoefficients& Q);

struct PlaneEnumeration {
    ConstraintSystem cons;
    std::vector<RationalVector> basis;  // nullspace basis of the constraints
    size_t dim = 0;
};

/// Affine parametrization of the integral horizontal planes at the level of
/// phi (the solution space does not depend on the fiber coordinates of phi).
PlaneEnumeration enumerate_integral_planes(const TowerPoint& phi);

/// Fiber coordinates of the level-(q+1) point a solution plane determines:
/// v^h_{Delta,Lambda} = C^{Delta-1_i,Lambda+1_j}_{i,j,h}, independent of the
/// admissible choice of (i, j). Returns nullopt when the choices disagree
/// (the plane is not in the image).
std::optional<TowerPoint> read_back(const QCoefficients& Q);

/// Fiber dimension of level q over level q-1.
uint64_t fiber_dim(const Frame& frame, uint32_t q);
/// Chart dimension of the level-q space (level -1 gives the plane chart).
uint64_t level_dim(const Frame& frame, int q);

/// The reduced distribution frame at a level: the truncated total derivatives
/// together with the top vertical coordinate fields.
struct ReducedFrame {
    std::shared_ptr<frames::Chart> chart;
    std::vector<frames::Derivation> fields;  // d*l total derivatives first
    size_t d_count = 0;
};
ReducedFrame reduced_distribution_basis(const Frame& frame, uint32_t level);

/// Chart point as a flat coordinate vector of the level chart.
RationalVector chart_point(const frames::Chart& chart, const TowerPoint& phi);

/// Symbolic basis of the integral element a level-k point determines, as
/// polynomials in the level-k chart coordinates; the top-level coordinates
/// are fixed by the lift. Used to push tangent vectors into the jet model.
struct PlaneFamily {
    std::shared_ptr<frames::Chart> chart;  // level k
    // basis vector j: component polys over the Cartan basis of the jet model
    std::vector<std::vector<Poly>> a_polys;  // [j][i], i < n
    std::vector<std::vector<Poly>> p_polys;  // [j][flat top index]

    jet::CartanVector value_at(const jet::JetModel& model, const RationalVector& point,
                               uint32_t j) const;
    jet::CartanVector derivative_at(const jet::JetModel& model, const RationalVector& point,
                                    const RationalVector& tangent, uint32_t j) const;
};
PlaneFamily integral_plane_family(const Frame& frame, const CoeffMap& lift);

struct PolarReport {
    bool ok = true;
    uint64_t samples = 0;
    uint64_t vectors_checked = 0;
    uint64_t non_members_seen = 0;
    std::vector<std::string> failures;
};

/// Dual-route polar verification: push the reduced distribution of the
/// level-k space into the jet model and compare membership verdicts of the
/// span test against the metasymplectic polar test, on member and non-member
/// tangent vectors; also checks independence of the lift.
PolarReport verify_polar(const Frame& frame, uint64_t seed, uint32_t samples);

}  // namespace plab::tower

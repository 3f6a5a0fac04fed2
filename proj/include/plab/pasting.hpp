#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "plab/poly.hpp"
#include "plab/sympoly.hpp"
#include "plab/tower.hpp"

namespace plab::pasting {

/// A polynomial section of the partial-extension bundle over the plane chart:
/// for each (lambda, h) a polynomial in the A_{i,j} (variable ids i*l + j).
struct Section {
    Frame frame;
    std::map<std::pair<MultiIndex, uint32_t>, Poly> values;

    Poly value(const MultiIndex& lambda, uint32_t h) const;
    void set_value(const MultiIndex& lambda, uint32_t h, Poly p);

    friend bool operator==(const Section& a, const Section& b) {
        return a.frame == b.frame && a.values == b.values;
    }
};

/// All adapted coefficients of a fixed polynomial as polynomial functions of
/// the plane coordinates.
std::map<HKey, Poly, HKeyLess> adapted_coefficients_symbolic(const HomPoly& f);

/// The section a single order-(k+1) extension induces: plane -> restriction
/// of f to the plane (the |delta| = 0 adapted coefficients).
Section section_from_jet(const HomPoly& f);

/// The graph of the full adapted-coefficient section of f is an integral
/// leaf of the span of the total derivatives: each D_{i,j} annihilates every
/// graph equation identically.
bool graph_is_integral_leaf(const HomPoly& f);

struct Violation {
    int kind = 0;  // 1: cross-derivative equality, 2: zero condition
    uint32_t i = 0, j = 0, j2 = 0, h = 0;
    MultiIndex lambda, lambda2;
};

/// Checks every instance of the infinitesimal pasting conditions by symbolic
/// differentiation; an empty list marks a holonomic candidate.
std::vector<Violation> check_infinitesimal(const Section& s);

/// Do the two partial extensions prescribed by the section agree on the
/// intersection of the two planes? Exact: substitutes a parametrization of
/// the intersection and compares polynomials.
bool check_global(const Section& s, const PlaneCoords& A, const PlaneCoords& A2);

struct GlueResult {
    enum class Status { Glued, NotHolonomic, InsufficientRank };
    Status status = Status::NotHolonomic;
    HomPoly f;
};

/// Reconstructs the single extension inducing the section, by solving the
/// linear system over enough sample planes and verifying the result
/// symbolically. NotHolonomic signals a section violating the pasting
/// conditions.
GlueResult glue(const Section& s);

/// Is the first jet of the section at A a plane of the level-1 image, i.e. a
/// zero of the infinitesimal pasting conditions at that point?
bool first_jet_in_equation(const Section& s, const PlaneCoords& A);

/// The infinitesimal pasting conditions as a constraint system over the
/// first-jet unknowns dv^h_lambda / dA_{i,j}, in the level-0 coefficient
/// column order.
tower::ConstraintSystem infinitesimal_constraints(const Frame& frame);

}  // namespace plab::pasting

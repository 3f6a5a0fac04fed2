#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plab/poly.hpp"
#include "plab/sympoly.hpp"

namespace plab::frames {

enum class ChartKind { Trivial, Adapted };

/// Coordinate chart of the flag space (level k+1) or of a reduced level-q
/// space. Variables are the plane coordinates A_{i,j} followed by the fiber
/// coordinates: u^h_{delta,lambda} (trivial, dual to divided powers, full
/// level only) or v^h_{delta,lambda} with |delta| <= level (adapted, dual to
/// the moving partially-divided powers).
class Chart {
public:
    Chart(const Frame& frame, ChartKind kind, uint32_t level);

    const Frame& frame() const { return frame_; }
    ChartKind kind() const { return kind_; }
    uint32_t level() const { return level_; }

    uint32_t a_var(uint32_t i, uint32_t j) const;
    uint32_t fiber_var(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h) const;
    bool has_fiber_key(const MultiIndex& delta, const MultiIndex& lambda) const;
    const std::vector<HKey>& fiber_keys() const { return keys_; }
    size_t a_count() const { return frame_.d() * frame_.l; }
    size_t var_count() const { return a_count() + keys_.size(); }
    bool is_a_var(uint32_t var) const { return var < a_count(); }
    const HKey& fiber_key_of(uint32_t var) const;
    std::string var_name(uint32_t var) const;

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.frame_ == b.frame_ && a.kind_ == b.kind_ && a.level_ == b.level_;
    }

private:
    Frame frame_;
    ChartKind kind_;
    uint32_t level_;
    std::vector<HKey> keys_;
    std::map<HKey, uint32_t, HKeyLess> key_pos_;
};

/// Symbolic vector field on a chart: coordinate components as polynomials in
/// the chart variables.
struct Derivation {
    const Chart* chart = nullptr;
    PolyMap comp;

    Poly apply(const Poly& p) const { return apply_derivation(comp, p); }
    bool is_zero() const { return derivation_is_zero(comp); }
    std::string str() const;

    friend bool operator==(const Derivation& a, const Derivation& b) {
        return *a.chart == *b.chart && a.comp == b.comp;
    }
};

/// Vertical field of the partially divided power (1/delta!)(y - sum A x)^delta
/// x^lambda (x) e_h: a plain coordinate field in the adapted chart, an
/// A-dependent combination of the u coordinate fields in the trivial one.
Derivation vertical_field(const Chart& chart, const MultiIndex& delta, const MultiIndex& lambda,
                          uint32_t h);

/// Homogeneous total derivative D_{i,j} of the chart: the coordinate field
/// of A_{i,j} in the trivial chart; in an adapted chart of level q, the
/// q-truncated expansion with first-order coefficients in the v's.
Derivation total_derivative(const Chart& chart, uint32_t i, uint32_t j);

Derivation lie_bracket(const Derivation& x, const Derivation& y);

/// u coordinates as functions of (A, v) on the full adapted chart.
std::map<HKey, Poly, HKeyLess> u_in_terms_of_v(const Chart& adapted_full);
/// v coordinates as functions of (A, u) on the trivial chart.
std::map<HKey, Poly, HKeyLess> v_in_terms_of_u(const Chart& trivial);

/// Push a derivation on the trivial chart through the coordinate change to
/// the full adapted chart.
Derivation to_adapted_chart(const Derivation& x, const Chart& adapted_full);

struct CommutatorFailure {
    std::string chart;
    std::string pair;
    std::string expected;
    std::string got;
};

struct CommutatorReport {
    bool ok = true;
    uint64_t pairs_checked = 0;
    std::vector<CommutatorFailure> failures;
};

/// Exhaustively brackets all frame pairs in the trivial chart, the full
/// adapted chart, and every truncated level, comparing against the stated
/// commutator right-hand sides.
CommutatorReport verify_commutators(const Frame& frame);

/// Tangent components of a derivation at a chart point.
RationalVector eval_at(const Derivation& x, const RationalVector& point);

/// Iterated derived span at a point: dimension sequence of span, span +
/// brackets, ... until stable. The fields must frame their distribution.
std::vector<size_t> span_closure_dims(std::vector<Derivation> fields, const RationalVector& point);

}  // namespace plab::frames

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace plab {

/// Multi-index: a tuple of naturals. Houses exponent tuples of monomials.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<uint32_t> entries) : e_(std::move(entries)) {}
    MultiIndex(std::initializer_list<uint32_t> entries) : e_(entries) {}

    static MultiIndex zeros(size_t dim) { return MultiIndex(std::vector<uint32_t>(dim, 0)); }
    /// 1_j: all zeros except a single 1 at position j.
    static MultiIndex unit(size_t dim, size_t j);

    size_t dim() const { return e_.size(); }
    uint32_t operator[](size_t i) const { return e_[i]; }
    const std::vector<uint32_t>& entries() const { return e_; }

    /// |delta|: the sum of entries.
    uint64_t total() const;
    /// delta!: the product of entry factorials.
    uint64_t factorial() const;

    /// delta + 1_j
    MultiIndex shifted_up(size_t j) const;
    /// delta - 1_i, or nullopt when entry i is zero.
    std::optional<MultiIndex> shifted_down(size_t i) const;

    std::string str() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }

private:
    std::vector<uint32_t> e_;
};

/// Graded-lexicographic order used for every basis enumeration: lower total
/// degree first; within a degree, lexicographically larger entry vector first,
/// so that e.g. (2,0) precedes (1,1) precedes (0,2).
bool grlex_less(const MultiIndex& a, const MultiIndex& b);

inline bool operator<(const MultiIndex& a, const MultiIndex& b) { return grlex_less(a, b); }

struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};

/// All multi-indices of the given dimension with the given total, in
/// graded-lexicographic order. Count is C(total + dim - 1, dim - 1).
std::vector<MultiIndex> enumerate_multiindices(size_t dim, uint64_t total);

uint64_t binomial(uint64_t n, uint64_t r);
uint64_t factorial(uint64_t n);
/// Number of multi-indices of the given dimension and total.
uint64_t multiindex_count(size_t dim, uint64_t total);

}  // namespace plab

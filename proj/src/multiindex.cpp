#include "plab/multiindex.hpp"

#include <stdexcept>

namespace plab {

MultiIndex MultiIndex::unit(size_t dim, size_t j) {
    if (j >= dim) throw std::out_of_range("MultiIndex::unit: position out of range");
    std::vector<uint32_t> e(dim, 0);
    e[j] = 1;
    return MultiIndex(std::move(e));
}

uint64_t MultiIndex::total() const {
    uint64_t s = 0;
    for (uint32_t v : e_) s += v;
    return s;
}

uint64_t MultiIndex::factorial() const {
    uint64_t p = 1;
    for (uint32_t v : e_) p *= plab::factorial(v);
    return p;
}

MultiIndex MultiIndex::shifted_up(size_t j) const {
    if (j >= e_.size()) throw std::out_of_range("MultiIndex::shifted_up: position out of range");
    std::vector<uint32_t> e = e_;
    ++e[j];
    return MultiIndex(std::move(e));
}

std::optional<MultiIndex> MultiIndex::shifted_down(size_t i) const {
    if (i >= e_.size()) throw std::out_of_range("MultiIndex::shifted_down: position out of range");
    if (e_[i] == 0) return std::nullopt;
    std::vector<uint32_t> e = e_;
    --e[i];
    return MultiIndex(std::move(e));
}

std::string MultiIndex::str() const {
    std::string s = "(";
    for (size_t i = 0; i < e_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e_[i]);
    }
    s += ")";
    return s;
}

bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
    uint64_t ta = a.total(), tb = b.total();
    if (ta != tb) return ta < tb;
    // same grade: larger leading entries first
    for (size_t i = 0; i < a.dim() && i < b.dim(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return a.dim() < b.dim();
}

std::vector<MultiIndex> enumerate_multiindices(size_t dim, uint64_t total) {
    std::vector<MultiIndex> out;
    if (dim == 0) {
        if (total == 0) out.push_back(MultiIndex(std::vector<uint32_t>{}));
        return out;
    }
    std::vector<uint32_t> cur(dim, 0);
    // recursive descent, first position takes the largest remaining value first
    auto rec = [&](auto&& self, size_t pos, uint64_t rem) -> void {
        if (pos + 1 == dim) {
            cur[pos] = static_cast<uint32_t>(rem);
            out.push_back(MultiIndex(cur));
            return;
        }
        for (uint64_t v = rem + 1; v-- > 0;) {
            cur[pos] = static_cast<uint32_t>(v);
            self(self, pos + 1, rem - v);
        }
    };
    rec(rec, 0, total);
    return out;
}

uint64_t binomial(uint64_t n, uint64_t r) {
    if (r > n) return 0;
    if (r > n - r) r = n - r;
    uint64_t acc = 1;
    for (uint64_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
    }
    return acc;
}

uint64_t factorial(uint64_t n) {
    uint64_t p = 1;
    for (uint64_t i = 2; i <= n; ++i) p *= i;
    return p;
}

uint64_t multiindex_count(size_t dim, uint64_t total) {
    if (dim == 0) return total == 0 ? 1 : 0;
    return binomial(total + dim - 1, dim - 1);
}

}  // namespace plab

#include "plab/matrix.hpp"

#include <stdexcept>

namespace plab {

RationalMatrix RationalMatrix::identity(size_t n) {
    RationalMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows, size_t cols) {
    RationalMatrix m(rows.size(), cols);
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("from_rows: ragged row");
        for (size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

void RationalMatrix::append_row(const RationalVector& row) {
    if (row.size() != cols_) throw std::invalid_argument("append_row: wrong width");
    a_.insert(a_.end(), row.begin(), row.end());
    ++rows_;
}

RationalMatrix RationalMatrix::rref(std::vector<size_t>* pivots) const {
    RationalMatrix m = *this;
    size_t prow = 0;
    for (size_t col = 0; col < cols_ && prow < rows_; ++col) {
        size_t sel = rows_;
        for (size_t r = prow; r < rows_; ++r) {
            if (!m.at(r, col).is_zero()) {
                sel = r;
                break;
            }
        }
        if (sel == rows_) continue;
        for (size_t c = 0; c < cols_; ++c) std::swap(m.at(prow, c), m.at(sel, c));
        Rational inv = Rational(1) / m.at(prow, col);
        for (size_t c = col; c < cols_; ++c) m.at(prow, c) *= inv;
        for (size_t r = 0; r < rows_; ++r) {
            if (r == prow || m.at(r, col).is_zero()) continue;
            Rational f = m.at(r, col);
            for (size_t c = col; c < cols_; ++c) m.at(r, c) -= f * m.at(prow, c);
        }
        if (pivots) pivots->push_back(col);
        ++prow;
    }
    return m;
}

size_t RationalMatrix::rank() const {
    std::vector<size_t> piv;
    rref(&piv);
    return piv.size();
}

std::vector<RationalVector> RationalMatrix::nullspace() const {
    std::vector<size_t> piv;
    RationalMatrix r = rref(&piv);
    std::vector<bool> is_pivot(cols_, false);
    for (size_t c : piv) is_pivot[c] = true;
    std::vector<RationalVector> basis;
    for (size_t c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        RationalVector v(cols_);
        v[c] = Rational(1);
        for (size_t pr = 0; pr < piv.size(); ++pr) {
            v[piv[pr]] = -r.at(pr, c);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RationalVector> RationalMatrix::solve(const RationalVector& b) const {
    if (b.size() != rows_) throw std::invalid_argument("solve: rhs size mismatch");
    RationalMatrix aug(rows_, cols_ + 1);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, cols_) = b[r];
    }
    std::vector<size_t> piv;
    RationalMatrix r = aug.rref(&piv);
    // pivot in the last column means an inconsistent row
    for (size_t c : piv) {
        if (c == cols_) return std::nullopt;
    }
    RationalVector x(cols_);
    for (size_t pr = 0; pr < piv.size(); ++pr) {
        x[piv[pr]] = r.at(pr, cols_);
    }
    return x;
}

RationalVector RationalMatrix::apply(const RationalVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("apply: size mismatch");
    RationalVector y(rows_);
    for (size_t r = 0; r < rows_; ++r) {
        Rational acc;
        for (size_t c = 0; c < cols_; ++c) {
            if (!at(r, c).is_zero() && !x[c].is_zero()) acc += at(r, c) * x[c];
        }
        y[r] = acc;
    }
    return y;
}

size_t span_rank(const std::vector<RationalVector>& vectors, size_t dim) {
    RationalMatrix m(0, dim);
    for (const auto& v : vectors) m.append_row(v);
    return m.rank();
}

bool in_span(const std::vector<RationalVector>& vectors, const RationalVector& v) {
    if (vectors.empty()) {
        for (const auto& c : v)
            if (!c.is_zero()) return false;
        return true;
    }
    size_t dim = v.size();
    // columns are the spanning vectors
    RationalMatrix mt(dim, vectors.size());
    for (size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != dim) throw std::invalid_argument("in_span: size mismatch");
        for (size_t i = 0; i < dim; ++i) mt.at(i, j) = vectors[j][i];
    }
    return mt.solve(v).has_value();
}

}  // namespace plab

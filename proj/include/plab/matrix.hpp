#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "plab/rational.hpp"

namespace plab {

using RationalVector = std::vector<Rational>;

/// Dense matrix over exact rationals. Gaussian elimination uses first-nonzero
/// pivoting and sets free variables to zero in solve(), so all results are
/// deterministic.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static RationalMatrix identity(size_t n);
    static RationalMatrix from_rows(const std::vector<RationalVector>& rows, size_t cols);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Rational& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const Rational& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    void append_row(const RationalVector& row);

    /// Reduced row echelon form; pivot column of each pivot row is appended to
    /// *pivots when given.
    RationalMatrix rref(std::vector<size_t>* pivots = nullptr) const;
    size_t rank() const;

    /// Exact basis of { x : Mx = 0 }. Size is cols() - rank().
    std::vector<RationalVector> nullspace() const;

    /// One exact solution of Mx = b (free variables zero), or nullopt when
    /// the system is inconsistent.
    std::optional<RationalVector> solve(const RationalVector& b) const;

    RationalVector apply(const RationalVector& x) const;

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    size_t rows_, cols_;
    std::vector<Rational> a_;
};

/// Rank of the span of a set of vectors.
size_t span_rank(const std::vector<RationalVector>& vectors, size_t dim);

/// Is v in the span of the given vectors?
bool in_span(const std::vector<RationalVector>& vectors, const RationalVector& v);

}  // namespace plab

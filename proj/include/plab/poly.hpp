#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "plab/rational.hpp"

namespace plab {

/// Sparse monomial over integer variable ids: sorted (var, exponent) pairs.
class Monomial {
public:
    Monomial() = default;
    static Monomial one() { return Monomial(); }
    static Monomial var(uint32_t id, uint32_t exp = 1);

    bool is_one() const { return v_.empty(); }
    uint32_t degree_of(uint32_t id) const;
    uint64_t total_degree() const;
    Monomial times(const Monomial& o) const;
    /// Divides by var^1; exponent of var must be positive.
    Monomial divided_by_var(uint32_t id) const;

    const std::vector<std::pair<uint32_t, uint32_t>>& factors() const { return v_; }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.v_ == b.v_; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.v_ < b.v_; }

private:
    std::vector<std::pair<uint32_t, uint32_t>> v_;  // sorted by var id, exponents > 0
};

/// Sparse multivariate polynomial over Rational coefficients. Variable ids
/// are owned by the calling context (a chart). Zero coefficients are never
/// stored.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& c);
    Poly(long long c) : Poly(Rational(c)) {}
    static Poly variable(uint32_t id) { return Poly(Monomial::var(id), Rational(1)); }
    Poly(const Monomial& m, const Rational& c);

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // value when is_constant()
    size_t term_count() const { return t_.size(); }
    const std::map<Monomial, Rational>& terms() const { return t_; }

    void add_term(const Monomial& m, const Rational& c);

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly scaled(const Rational& c) const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly derivative(uint32_t id) const;
    /// Substitutes polynomials for the given variables (all at once).
    Poly substituted(const std::map<uint32_t, Poly>& repl) const;
    /// Evaluates with values for every occurring variable.
    Rational eval(const std::function<Rational(uint32_t)>& value_of) const;
    uint64_t max_degree_of(uint32_t id) const;

    std::string str(const std::function<std::string(uint32_t)>& name_of) const;

private:
    std::map<Monomial, Rational> t_;
};

/// A derivation is determined by its action on coordinates: a finite map
/// var -> Poly (missing vars act as zero).
using PolyMap = std::map<uint32_t, Poly>;

/// X(p) for the derivation X with the given components.
Poly apply_derivation(const PolyMap& x, const Poly& p);

/// Componentwise Lie bracket: [X,Y](c) = X(Y(c)) - Y(X(c)).
PolyMap derivation_bracket(const PolyMap& x, const PolyMap& y);

PolyMap derivation_add(const PolyMap& x, const PolyMap& y);
PolyMap derivation_scale(const PolyMap& x, const Rational& c);
bool derivation_is_zero(const PolyMap& x);

}  // namespace plab

#include "plab/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace plab {

Monomial Monomial::var(uint32_t id, uint32_t exp) {
    Monomial m;
    if (exp > 0) m.v_.push_back({id, exp});
    return m;
}

uint32_t Monomial::degree_of(uint32_t id) const {
    for (const auto& [v, e] : v_) {
        if (v == id) return e;
    }
    return 0;
}

uint64_t Monomial::total_degree() const {
    uint64_t s = 0;
    for (const auto& [v, e] : v_) s += e;
    return s;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < v_.size() || j < o.v_.size()) {
        if (j == o.v_.size() || (i < v_.size() && v_[i].first < o.v_[j].first)) {
            r.v_.push_back(v_[i++]);
        } else if (i == v_.size() || o.v_[j].first < v_[i].first) {
            r.v_.push_back(o.v_[j++]);
        } else {
            r.v_.push_back({v_[i].first, v_[i].second + o.v_[j].second});
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::divided_by_var(uint32_t id) const {
    Monomial r;
    bool found = false;
    for (const auto& [v, e] : v_) {
        if (v == id) {
            found = true;
            if (e > 1) r.v_.push_back({v, e - 1});
        } else {
            r.v_.push_back({v, e});
        }
    }
    if (!found) throw std::domain_error("Monomial::divided_by_var: exponent is zero");
    return r;
}

Poly::Poly(const Rational& c) {
    if (!c.is_zero()) t_[Monomial::one()] = c;
}

Poly::Poly(const Monomial& m, const Rational& c) {
    if (!c.is_zero()) t_[m] = c;
}

bool Poly::is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one());
}

Rational Poly::constant_value() const {
    if (t_.empty()) return Rational(0);
    if (!is_constant()) throw std::domain_error("Poly::constant_value: not constant");
    return t_.begin()->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_[m] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.t_) r.add_term(m, c);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.t_) r.add_term(m, -c);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.t_) {
        for (const auto& [mb, cb] : b.t_) {
            r.add_term(ma.times(mb), ca * cb);
        }
    }
    return r;
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [m, c] : t_) r.t_[m] = -c;
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    Poly r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : t_) r.t_[m] = v * c;
    return r;
}

Poly Poly::derivative(uint32_t id) const {
    Poly r;
    for (const auto& [m, c] : t_) {
        uint32_t e = m.degree_of(id);
        if (e == 0) continue;
        r.add_term(m.divided_by_var(id), c * Rational(static_cast<long long>(e)));
    }
    return r;
}

Poly Poly::substituted(const std::map<uint32_t, Poly>& repl) const {
    Poly r;
    for (const auto& [m, c] : t_) {
        Poly term(c);
        for (const auto& [v, e] : m.factors()) {
            auto it = repl.find(v);
            Poly base = (it != repl.end()) ? it->second : Poly::variable(v);
            for (uint32_t t = 0; t < e; ++t) term *= base;
        }
        r += term;
    }
    return r;
}

Rational Poly::eval(const std::function<Rational(uint32_t)>& value_of) const {
    Rational acc;
    for (const auto& [m, c] : t_) {
        Rational term = c;
        for (const auto& [v, e] : m.factors()) {
            Rational x = value_of(v);
            for (uint32_t t = 0; t < e; ++t) term *= x;
        }
        acc += term;
    }
    return acc;
}

uint64_t Poly::max_degree_of(uint32_t id) const {
    uint64_t d = 0;
    for (const auto& [m, c] : t_) d = std::max<uint64_t>(d, m.degree_of(id));
    return d;
}

std::string Poly::str(const std::function<std::string(uint32_t)>& name_of) const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : t_) {
        if (!first) s += " + ";
        first = false;
        s += c.str();
        for (const auto& [v, e] : m.factors()) {
            s += "*" + name_of(v);
            if (e > 1) s += "^" + std::to_string(e);
        }
    }
    return s;
}

Poly apply_derivation(const PolyMap& x, const Poly& p) {
    Poly r;
    for (const auto& [var, comp] : x) {
        Poly d = p.derivative(var);
        if (!d.is_zero()) r += comp * d;
    }
    return r;
}

PolyMap derivation_bracket(const PolyMap& x, const PolyMap& y) {
    PolyMap r;
    // union of coordinate supports
    for (const auto& [var, ycomp] : y) {
        Poly v = apply_derivation(x, ycomp);
        auto it = x.find(var);
        if (it != x.end()) v -= apply_derivation(y, it->second);
        if (!v.is_zero()) r[var] = v;
    }
    for (const auto& [var, xcomp] : x) {
        if (y.count(var)) continue;
        Poly v = -apply_derivation(y, xcomp);
        if (!v.is_zero()) r[var] = v;
    }
    return r;
}

PolyMap derivation_add(const PolyMap& x, const PolyMap& y) {
    PolyMap r = x;
    for (const auto& [var, comp] : y) {
        auto it = r.find(var);
        if (it == r.end()) {
            r[var] = comp;
        } else {
            it->second += comp;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

PolyMap derivation_scale(const PolyMap& x, const Rational& c) {
    PolyMap r;
    if (c.is_zero()) return r;
    for (const auto& [var, comp] : x) r[var] = comp.scaled(c);
    return r;
}

bool derivation_is_zero(const PolyMap& x) {
    for (const auto& [var, comp] : x) {
        if (!comp.is_zero()) return false;
    }
    return true;
}

}  // namespace plab

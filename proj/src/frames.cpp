#include "plab/frames.hpp"

#include <algorithm>
#include <stdexcept>

#include "expand.hpp"

namespace plab::frames {

Chart::Chart(const Frame& frame, ChartKind kind, uint32_t level)
    : frame_(frame), kind_(kind), level_(level) {
    if (kind_ == ChartKind::Trivial && level_ != frame_.degree())
        throw std::invalid_argument("Chart: the trivial chart exists at the full level only");
    if (level_ > frame_.degree()) throw std::invalid_argument("Chart: level out of range");
    for (uint32_t t = 0; t <= level_; ++t) {
        for (const auto& [delta, lambda] : frame_.pairs_with_delta_total(t)) {
            for (uint32_t h = 0; h < frame_.m; ++h) {
                key_pos_[HKey{delta, lambda, h}] = static_cast<uint32_t>(keys_.size());
                keys_.push_back(HKey{delta, lambda, h});
            }
        }
    }
}

uint32_t Chart::a_var(uint32_t i, uint32_t j) const {
    if (i >= frame_.d() || j >= frame_.l) throw std::out_of_range("Chart::a_var");
    return i * frame_.l + j;
}

uint32_t Chart::fiber_var(const MultiIndex& delta, const MultiIndex& lambda, uint32_t h) const {
    auto it = key_pos_.find(HKey{delta, lambda, h});
    if (it == key_pos_.end()) throw std::out_of_range("Chart::fiber_var: no such coordinate");
    return static_cast<uint32_t>(a_count()) + it->second;
}

bool Chart::has_fiber_key(const MultiIndex& delta, const MultiIndex& lambda) const {
    return key_pos_.count(HKey{delta, lambda, 0}) > 0;
}

const HKey& Chart::fiber_key_of(uint32_t var) const {
    if (var < a_count() || var >= var_count()) throw std::out_of_range("Chart::fiber_key_of");
    return keys_[var - a_count()];
}

std::string Chart::var_name(uint32_t var) const {
    if (is_a_var(var)) {
        uint32_t i = var / frame_.l, j = var % frame_.l;
        return "A_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
    }
    const HKey& key = fiber_key_of(var);
    std::string base = kind_ == ChartKind::Trivial ? "u" : "v";
    return base + "_{" + key.delta.str() + "," + key.lambda.str() + "}^" + std::to_string(key.h + 1);
}

std::string Derivation::str() const {
    if (comp.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [var, poly] : comp) {
        if (!first) s += " + ";
        first = false;
        s += "(" + poly.str([&](uint32_t v) { return chart->var_name(v); }) + ") d/d" +
             chart->var_name(var);
    }
    return s;
}

Derivation vertical_field(const Chart& chart, const MultiIndex& delta, const MultiIndex& lambda,
                          uint32_t h) {
    const Frame& fr = chart.frame();
    if (delta.total() + lambda.total() != fr.degree())
        throw std::invalid_argument("vertical_field: degree mismatch");
    Derivation out;
    out.chart = &chart;
    if (chart.kind() == ChartKind::Adapted) {
        out.comp[chart.fiber_var(delta, lambda, h)] = Poly(Rational(1));
        return out;
    }
    // trivial chart: expand (1/delta!)(y - sum A x)^delta x^lambda over the
    // divided-power coordinate fields, coefficients polynomial in A
    Poly pre(Rational(1, static_cast<long long>(delta.factorial())));
    detail::expand_shifted_power<Poly>(
        delta, lambda,
        [&](size_t i, size_t j) {
            return -Poly::variable(chart.a_var(static_cast<uint32_t>(i), static_cast<uint32_t>(j)));
        },
        pre,
        [&](const MultiIndex& bd, const MultiIndex& bl, const Poly& c) {
            Poly scaled = c.scaled(Rational(static_cast<long long>(bd.factorial() * bl.factorial())));
            if (scaled.is_zero()) return;
            uint32_t var = chart.fiber_var(bd, bl, h);
            auto it = out.comp.find(var);
            if (it == out.comp.end()) {
                out.comp[var] = scaled;
            } else {
                it->second += scaled;
                if (it->second.is_zero()) out.comp.erase(it);
            }
        });
    return out;
}

Derivation total_derivative(const Chart& chart, uint32_t i, uint32_t j) {
    const Frame& fr = chart.frame();
    if (i >= fr.d() || j >= fr.l) throw std::out_of_range("total_derivative: index range");
    Derivation out;
    out.chart = &chart;
    out.comp[chart.a_var(i, j)] = Poly(Rational(1));
    if (chart.kind() == ChartKind::Trivial) return out;
    for (const HKey& key : chart.fiber_keys()) {
        if (key.delta.total() >= chart.level()) continue;
        if (key.lambda[j] == 0) continue;
        out.comp[chart.fiber_var(key.delta, key.lambda, key.h)] =
            Poly::variable(chart.fiber_var(key.delta.shifted_up(i), *key.lambda.shifted_down(j), key.h));
    }
    return out;
}

Derivation lie_bracket(const Derivation& x, const Derivation& y) {
    if (!(*x.chart == *y.chart)) throw std::invalid_argument("lie_bracket: chart mismatch");
    Derivation out;
    out.chart = x.chart;
    out.comp = derivation_bracket(x.comp, y.comp);
    return out;
}

std::map<HKey, Poly, HKeyLess> u_in_terms_of_v(const Chart& adapted_full) {
    if (adapted_full.kind() != ChartKind::Adapted ||
        adapted_full.level() != adapted_full.frame().degree())
        throw std::invalid_argument("u_in_terms_of_v: full adapted chart required");
    std::map<HKey, Poly, HKeyLess> out;
    for (const HKey& key : adapted_full.fiber_keys()) {
        // contribution of v_key * (1/delta!)(y - sum A x)^delta x^lambda
        Poly pre = Poly::variable(adapted_full.fiber_var(key.delta, key.lambda, key.h))
                       .scaled(Rational(1, static_cast<long long>(key.delta.factorial())));
        detail::expand_shifted_power<Poly>(
            key.delta, key.lambda,
            [&](size_t i, size_t j) {
                return -Poly::variable(
                    adapted_full.a_var(static_cast<uint32_t>(i), static_cast<uint32_t>(j)));
            },
            pre,
            [&](const MultiIndex& bd, const MultiIndex& bl, const Poly& c) {
                Poly add = c.scaled(Rational(static_cast<long long>(bd.factorial() * bl.factorial())));
                if (add.is_zero()) return;
                HKey ukey{bd, bl, key.h};
                auto it = out.find(ukey);
                if (it == out.end()) {
                    out[ukey] = add;
                } else {
                    it->second += add;
                }
            });
    }
    // drop keys that collapsed to zero
    for (auto it = out.begin(); it != out.end();) {
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    }
    return out;
}

std::map<HKey, Poly, HKeyLess> v_in_terms_of_u(const Chart& trivial) {
    if (trivial.kind() != ChartKind::Trivial)
        throw std::invalid_argument("v_in_terms_of_u: trivial chart required");
    std::map<HKey, Poly, HKeyLess> out;
    for (const HKey& key : trivial.fiber_keys()) {
        // u_key contributes u/(Delta! Lambda!) y^Delta x^Lambda; substitute
        // y = yt + A x and collect delta! times the yt^delta x^lambda part
        Poly pre = Poly::variable(trivial.fiber_var(key.delta, key.lambda, key.h))
                       .scaled(Rational(
                           1, static_cast<long long>(key.delta.factorial() * key.lambda.factorial())));
        detail::expand_shifted_power<Poly>(
            key.delta, key.lambda,
            [&](size_t i, size_t j) {
                return Poly::variable(
                    trivial.a_var(static_cast<uint32_t>(i), static_cast<uint32_t>(j)));
            },
            pre,
            [&](const MultiIndex& bd, const MultiIndex& bl, const Poly& c) {
                Poly add = c.scaled(Rational(static_cast<long long>(bd.factorial())));
                if (add.is_zero()) return;
                HKey vkey{bd, bl, key.h};
                auto it = out.find(vkey);
                if (it == out.end()) {
                    out[vkey] = add;
                } else {
                    it->second += add;
                }
            });
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    }
    return out;
}

Derivation to_adapted_chart(const Derivation& x, const Chart& adapted_full) {
    const Chart& trivial = *x.chart;
    if (trivial.kind() != ChartKind::Trivial)
        throw std::invalid_argument("to_adapted_chart: source must live on the trivial chart");
    if (!(trivial.frame() == adapted_full.frame()))
        throw std::invalid_argument("to_adapted_chart: frame mismatch");

    auto u_of_v = u_in_terms_of_v(adapted_full);
    auto v_of_u = v_in_terms_of_u(trivial);
    // substitution of every trivial fiber variable by its (A, v) expression
    std::map<uint32_t, Poly> subst;
    for (const HKey& key : trivial.fiber_keys()) {
        auto it = u_of_v.find(key);
        subst[trivial.fiber_var(key.delta, key.lambda, key.h)] =
            it == u_of_v.end() ? Poly() : it->second;
    }

    Derivation out;
    out.chart = &adapted_full;
    const Frame& fr = trivial.frame();
    for (uint32_t i = 0; i < fr.d(); ++i) {
        for (uint32_t j = 0; j < fr.l; ++j) {
            auto it = x.comp.find(trivial.a_var(i, j));
            if (it == x.comp.end()) continue;
            Poly c = it->second.substituted(subst);
            if (!c.is_zero()) out.comp[adapted_full.a_var(i, j)] = c;
        }
    }
    for (const HKey& key : adapted_full.fiber_keys()) {
        auto expr = v_of_u.find(key);
        if (expr == v_of_u.end()) continue;
        Poly c = x.apply(expr->second).substituted(subst);
        if (!c.is_zero()) out.comp[adapted_full.fiber_var(key.delta, key.lambda, key.h)] = c;
    }
    return out;
}

namespace {

void check_pair(const Chart& chart, const std::string& chart_name, const Derivation& x,
                const std::string& xname, const Derivation& y, const std::string& yname,
                const Derivation& expected, CommutatorReport& report) {
    ++report.pairs_checked;
    Derivation got = lie_bracket(x, y);
    if (!(got.comp == expected.comp)) {
        report.ok = false;
        report.failures.push_back(
            {chart_name, "[" + xname + ", " + yname + "]", expected.str(), got.str()});
    }
    (void)chart;
}

void verify_chart_commutators(const Chart& chart, const std::string& chart_name,
                              CommutatorReport& report) {
    const Frame& fr = chart.frame();
    struct Named {
        std::string name;
        Derivation field;
    };
    std::vector<Named> ds, vs;
    for (uint32_t i = 0; i < fr.d(); ++i) {
        for (uint32_t j = 0; j < fr.l; ++j) {
            ds.push_back({"D_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}",
                          total_derivative(chart, i, j)});
        }
    }
    for (const HKey& key : chart.fiber_keys()) {
        vs.push_back({"V_{" + key.delta.str() + "," + key.lambda.str() + "}^" +
                          std::to_string(key.h + 1),
                      vertical_field(chart, key.delta, key.lambda, key.h)});
    }
    Derivation zero;
    zero.chart = &chart;

    for (size_t a = 0; a < ds.size(); ++a)
        for (size_t b = a + 1; b < ds.size(); ++b)
            check_pair(chart, chart_name, ds[a].field, ds[a].name, ds[b].field, ds[b].name, zero,
                       report);
    for (size_t a = 0; a < vs.size(); ++a)
        for (size_t b = a + 1; b < vs.size(); ++b)
            check_pair(chart, chart_name, vs[a].field, vs[a].name, vs[b].field, vs[b].name, zero,
                       report);
    for (size_t a = 0; a < vs.size(); ++a) {
        const HKey& key = chart.fiber_keys()[a];
        for (uint32_t i = 0; i < fr.d(); ++i) {
            for (uint32_t j = 0; j < fr.l; ++j) {
                Derivation expected = zero;
                if (key.delta[i] > 0) {
                    expected = vertical_field(chart, *key.delta.shifted_down(i),
                                              key.lambda.shifted_up(j), key.h);
                }
                const Derivation& dij = ds[i * fr.l + j].field;
                check_pair(chart, chart_name, vs[a].field, vs[a].name, dij,
                           ds[i * fr.l + j].name, expected, report);
            }
        }
    }
}

}  // namespace

CommutatorReport verify_commutators(const Frame& frame) {
    CommutatorReport report;
    Chart trivial(frame, ChartKind::Trivial, frame.degree());
    verify_chart_commutators(trivial, "trivial", report);
    std::vector<Chart> charts;
    charts.reserve(frame.degree() + 1);
    for (uint32_t q = 0; q <= frame.degree(); ++q) charts.emplace_back(frame, ChartKind::Adapted, q);
    for (uint32_t q = 0; q <= frame.degree(); ++q) {
        verify_chart_commutators(charts[q], "adapted level " + std::to_string(q), report);
    }
    return report;
}

RationalVector eval_at(const Derivation& x, const RationalVector& point) {
    if (point.size() != x.chart->var_count())
        throw std::invalid_argument("eval_at: point dimension mismatch");
    RationalVector out(point.size());
    for (const auto& [var, poly] : x.comp) {
        out[var] = poly.eval([&](uint32_t v) { return point[v]; });
    }
    return out;
}

std::vector<size_t> span_closure_dims(std::vector<Derivation> fields, const RationalVector& point) {
    std::vector<size_t> dims;
    auto rank_of = [&]() {
        std::vector<RationalVector> rows;
        rows.reserve(fields.size());
        for (const auto& f : fields) rows.push_back(eval_at(f, point));
        return span_rank(rows, point.size());
    };
    dims.push_back(rank_of());
    while (dims.back() < point.size()) {
        size_t before = fields.size();
        std::vector<Derivation> fresh;
        auto known = [&](const Derivation& d) {
            for (const auto& f : fields)
                if (f.comp == d.comp) return true;
            for (const auto& f : fresh)
                if (f.comp == d.comp) return true;
            return false;
        };
        for (size_t a = 0; a < before; ++a) {
            for (size_t b = a + 1; b < before; ++b) {
                Derivation br = lie_bracket(fields[a], fields[b]);
                if (!br.is_zero() && !known(br)) fresh.push_back(std::move(br));
            }
        }
        if (fresh.empty()) break;  // bracket-closed: involutive at this stage
        fields.insert(fields.end(), fresh.begin(), fresh.end());
        size_t next = rank_of();
        if (next == dims.back()) break;
        dims.push_back(next);
    }
    return dims;
}

}  // namespace plab::frames

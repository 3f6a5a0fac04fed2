#pragma once

// Shared expansion engine: monomial coefficients of
//   prod_i (Y_i + sum_j a(i,j) x_j)^{delta_i} * x^lambda
// as a map (Delta, Lambda) -> coefficient. The coefficient type is generic so
// the same code serves numeric plane coordinates and symbolic ones
// (polynomials in the A variables).

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "plab/multiindex.hpp"
#include "plab/rational.hpp"

namespace plab::detail {

// CoeffT needs: CoeffT(), CoeffT * CoeffT, construction from Rational,
// and operator+= on the accumulator side (handled by the Sink).
template <class CoeffT, class GetA, class Sink>
void expand_shifted_power(const MultiIndex& delta, const MultiIndex& lambda, GetA&& a,
                          const CoeffT& prefactor, Sink&& sink) {
    const size_t d = delta.dim();
    const size_t l = lambda.dim();
    std::vector<uint32_t> big_delta(d, 0);
    std::vector<uint32_t> extra_x(l, 0);

    // per row i: (Y_i + S_i)^{delta_i} = sum_{c} C(delta_i, c) Y_i^c S_i^{delta_i - c},
    // S_i^p = sum_{|mu| = p} p!/mu! prod_j a(i,j)^{mu_j} x^mu
    auto rec = [&](auto&& self, size_t i, const CoeffT& acc) -> void {
        if (i == d) {
            std::vector<uint32_t> lam(l);
            for (size_t j = 0; j < l; ++j) lam[j] = lambda[j] + extra_x[j];
            sink(MultiIndex(big_delta), MultiIndex(std::move(lam)), acc);
            return;
        }
        const uint32_t di = delta[i];
        for (uint32_t c = 0; c <= di; ++c) {
            big_delta[i] = c;
            const uint32_t p = di - c;
            const uint64_t binom_ci = binomial(di, c);
            for (const MultiIndex& mu : enumerate_multiindices(l, p)) {
                CoeffT factor(Rational(static_cast<long long>(binom_ci * factorial(p) / mu.factorial())));
                bool zero = false;
                for (size_t j = 0; j < l && !zero; ++j) {
                    for (uint32_t t = 0; t < mu[j]; ++t) factor = factor * a(i, j);
                }
                for (size_t j = 0; j < l; ++j) extra_x[j] += mu[j];
                self(self, i + 1, acc * factor);
                for (size_t j = 0; j < l; ++j) extra_x[j] -= mu[j];
            }
        }
        big_delta[i] = 0;
    };
    rec(rec, 0, prefactor);
}

}  // namespace plab::detail

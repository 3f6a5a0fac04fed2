#pragma once

#include <cstdint>

#include "plab/rational.hpp"

namespace plab {

/// splitmix64 stream; the verification suites draw all random rational
/// coordinates through this so runs are reproducible from the seed alone.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

    /// Small-height sample: numerator in [-9, 9], denominator in [1, 4].
    Rational small_rational() { return Rational(range(-9, 9), range(1, 4)); }

    Rational nonzero_rational() {
        for (;;) {
            Rational q = small_rational();
            if (!q.is_zero()) return q;
        }
    }
};

}  // namespace plab

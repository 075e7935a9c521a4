#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "polyflow/cf.hpp"

namespace polyflow::testutil {

// Deterministic random continued fraction with digits in [1, max_digit].
inline ContinuedFraction random_cf(std::mt19937_64& rng, long long len = 60,
                                   long long max_digit = 6) {
    std::vector<long long> d;
    for (long long i = 0; i < len; ++i) d.push_back(1 + (long long)(rng() % max_digit));
    return ContinuedFraction::from_digits(std::move(d));
}

// Sort linear forms by value at alpha.
inline std::vector<LinForm> sorted_values(const ContinuedFraction& cf, std::vector<LinForm> v) {
    std::sort(v.begin(), v.end(),
              [&](const LinForm& a, const LinForm& b) { return a != b && cf.less(a, b); });
    return v;
}

// Uniform integer in [0, n) from raw 64-bit draws (implementation-defined
// std distributions would break cross-toolchain determinism).
inline unsigned long long uniform_below(std::mt19937_64& rng, unsigned long long n) {
    unsigned long long limit = ~0ULL - (~0ULL % n);
    for (;;) {
        unsigned long long x = rng();
        if (x < limit) return x % n;
    }
}

// Uniform big integer in [0, n).
inline Int uniform_int_below(std::mt19937_64& rng, const Int& n) {
    size_t bits = msb(n) + 1;
    size_t words = (bits + 63) / 64;
    for (;;) {
        Int x = 0;
        for (size_t w = 0; w < words; ++w) x = (x << 64) | Int(rng());
        x >>= words * 64 - bits;
        if (x < n) return x;
    }
}

}  // namespace polyflow::testutil

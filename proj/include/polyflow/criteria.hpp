#pragma once

#include "polyflow/surface.hpp"

namespace polyflow {

// The doubly periodic d-coloring of the n-square-b surface, b = {m alpha}.
// The left vertical edge of every square carries the same m intervals
// [points[j], points[j+1]); the color pattern shifts by one per square.
struct ColoringSpec {
    int n = 0, m = 0, d = 0;
    int nu = 0;                   // index of b in the sorted sequence of {q alpha}
    long long upsilon = 0;        // #{1 <= q <= m : {q alpha} < alpha}
    std::vector<int> order;       // q with points[j] = {q alpha}, j = 0..m-1
    std::vector<LinForm> points;  // 0 = b'_0 < b'_1 < ... < b'_{m-1}

    // Color (0-based, 0 .. d-1) of interval j on the left edge of square l,
    // reading c_1, c_2, ... from the top of the edge of square 0.
    int color_of(int square_l, int interval_j) const {
        return ((square_l + m - 1 - interval_j) % d + d) % d;
    }
};

// #{1 <= q <= m : {q alpha} < alpha}
long long upsilon(int m, const ContinuedFraction& cf);

struct GcdVerdict {
    long long upsilon = 0;
    long long d = 1;   // gcd(n, m, upsilon), with gcd(x, 0) = x
    bool holds = false;
};
GcdVerdict gcd_criterion(int n, int m, const ContinuedFraction& cf);

// Builds the coloring for a divisor d >= 2 of both n and m: sorts the orbit
// points {q alpha}, q = 0..m, drops b = {m alpha}, and colors the resulting
// intervals top to bottom.  Throws DivisibilityViolated otherwise.
ColoringSpec double_periodic_coloring(int n, int m, const ContinuedFraction& cf, int d);

struct InvarianceVerdict {
    bool combinatorial = false;  // exact C* = C** comparison (authoritative)
    bool sampled = false;        // color preserved at every sampled orbit point
    long long samples = 0;
};

// Checks that the coloring is preserved by the alpha-flow on the given
// n-square-b surface: exactly, by comparing the translated edge coloring
// against the gate-advanced one, and empirically on random orbit points.
InvarianceVerdict verify_invariance(const ColoringSpec& coloring,
                                    const PolysquareSurface& surface,
                                    long long samples, unsigned long long seed);

// Visit density of each color class inside each square, as exact linear
// forms: densities[c][l] = (d/n) * sum of interval lengths of color c on
// square l.  Throws NotInvariant when the coloring is not flow-invariant.
std::vector<std::vector<LinForm>> predicted_densities(const ColoringSpec& coloring,
                                                      const ContinuedFraction& cf);

}  // namespace polyflow

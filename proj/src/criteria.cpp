#include "polyflow/criteria.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "polyflow/iet.hpp"

namespace polyflow {

namespace {

const LinForm kAlpha(Rat(0), Rat(1));

// C* and C** from the invariance proof: both are colorings of the unit
// torus with division points {q alpha}, q = 1..m.  C* translates the edge
// coloring by alpha; C** advances the color of everything under the gate by
// one.  The coloring is flow-invariant exactly when they agree.
bool star_colorings_equal(const ColoringSpec& c, const ContinuedFraction& cf) {
    int m = c.m;
    LinForm b = cf.frac_of(kAlpha * Rat(m));
    auto c0_interval = [&](const LinForm& y) {
        int j = 0;
        while (j + 1 < m && !cf.less(y, c.points[j + 1])) ++j;
        return j;
    };
    for (int j = 0; j < m; ++j) {
        // midpoint of the j-th interval of C*, i.e. of C0 shifted by alpha
        LinForm hi = (j + 1 < m) ? c.points[j + 1] : LinForm(Rat(1), Rat(0));
        LinForm mid = cf.frac_of((c.points[j] + hi) * Rat(1, 2) + kAlpha);
        int star = c.color_of(0, j);
        int j0 = c0_interval(mid);
        int dbl = c.color_of(0, j0);
        if (mid != b && cf.less(mid, b)) dbl = (dbl + 1) % c.d;
        if (star != dbl) return false;
    }
    return true;
}

}  // namespace

long long upsilon(int m, const ContinuedFraction& cf) {
    long long count = 0;
    for (int q = 1; q <= m; ++q) {
        LinForm t = cf.frac_of(kAlpha * Rat(q));
        if (t != kAlpha && cf.less(t, kAlpha)) ++count;
    }
    return count;
}

GcdVerdict gcd_criterion(int n, int m, const ContinuedFraction& cf) {
    GcdVerdict v;
    v.upsilon = upsilon(m, cf);
    v.d = std::gcd(std::gcd((long long)n, (long long)m), v.upsilon);
    v.holds = v.d > 1;
    return v;
}

ColoringSpec double_periodic_coloring(int n, int m, const ContinuedFraction& cf, int d) {
    if (d < 2 || n % d != 0 || m % d != 0)
        throw DivisibilityViolated("coloring needs a common divisor d >= 2 of n and m");

    std::vector<int> idx(m + 1);
    std::vector<LinForm> val(m + 1);
    for (int q = 0; q <= m; ++q) {
        idx[q] = q;
        val[q] = cf.frac_of(kAlpha * Rat(q));
    }
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return val[a] != val[b] && cf.less(val[a], val[b]); });

    ColoringSpec c;
    c.n = n;
    c.m = m;
    c.d = d;
    c.upsilon = upsilon(m, cf);
    for (int pos = 0; pos <= m; ++pos) {
        if (idx[pos] == m) {
            c.nu = pos;
            continue;
        }
        c.order.push_back(idx[pos]);
        c.points.push_back(val[idx[pos]]);
    }
    return c;
}

InvarianceVerdict verify_invariance(const ColoringSpec& coloring,
                                    const PolysquareSurface& surface,
                                    long long samples, unsigned long long seed) {
    const ContinuedFraction& cf = surface.cf;
    if (surface.size() != coloring.n)
        throw PreconditionViolated("coloring and surface disagree on the square count");

    InvarianceVerdict v;
    v.combinatorial = star_colorings_equal(coloring, cf);

    auto color_at = [&](const LinForm& x) {
        int l = (int)cf.floor_of(x).convert_to<long long>();
        LinForm y = x - LinForm(Rat(l), Rat(0));
        int j = 0;
        while (j + 1 < coloring.m && !cf.less(y, coloring.points[j + 1])) ++j;
        return coloring.color_of(l, j);
    };

    IntervalExchange T = build_iet(surface);
    std::mt19937_64 rng(seed);
    v.sampled = true;
    const long long den = 1000003;
    while (v.samples < samples) {
        long long num;
        do {
            num = (long long)(rng() % (unsigned long long)den);
        } while (num == 0);
        LinForm x(Rat(num, den) * Rat(coloring.n), Rat(0));
        LinForm y;
        try {
            y = T.apply(x);
        } catch (const SingularHit&) {
            continue;
        }
        if (color_at(y) != color_at(x)) v.sampled = false;
        ++v.samples;
    }
    return v;
}

std::vector<std::vector<LinForm>> predicted_densities(const ColoringSpec& coloring,
                                                      const ContinuedFraction& cf) {
    if (!star_colorings_equal(coloring, cf))
        throw NotInvariant("coloring is not preserved by the flow");

    Rat scale(coloring.d, coloring.n);
    std::vector<std::vector<LinForm>> out(coloring.d,
                                          std::vector<LinForm>(coloring.n));
    for (int l = 0; l < coloring.n; ++l) {
        for (int j = 0; j < coloring.m; ++j) {
            LinForm hi = (j + 1 < coloring.m) ? coloring.points[j + 1]
                                              : LinForm(Rat(1), Rat(0));
            out[coloring.color_of(l, j)][l] += (hi - coloring.points[j]) * scale;
        }
    }
    return out;
}

}  // namespace polyflow

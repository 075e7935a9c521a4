#include "polyflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace polyflow {

namespace {

const LinForm kAlpha(Rat(0), Rat(1));

double to_double(const ContinuedFraction& cf, const LinForm& f) {
    return cf.approx(f, Rat(Int(1), Int(1) << 48)).mid().convert_to<double>();
}

Int ceil_of(const ContinuedFraction& cf, const LinForm& f) {
    Int fl = cf.floor_of(f);
    return f == LinForm(Rat(fl), Rat(0)) ? fl : fl + 1;
}

}  // namespace

OrbitStats merge(const OrbitStats& a, const OrbitStats& b) {
    if (a.time_per_square.size() != b.time_per_square.size() || a.grid != b.grid)
        throw Error("merge: incompatible orbit statistics");
    OrbitStats out = a;
    out.total_time += b.total_time;
    out.crossings += b.crossings;
    out.gate_crossings += b.gate_crossings;
    for (size_t i = 0; i < out.time_per_square.size(); ++i)
        out.time_per_square[i] += b.time_per_square[i];
    for (size_t i = 0; i < out.cell_time.size(); ++i) out.cell_time[i] += b.cell_time[i];
    return out;
}

OrbitStats simulate(const PolysquareSurface& surface, const IntervalExchange& T,
                    const LinForm& x0, long long crossings, int grid) {
    const ContinuedFraction& cf = surface.cf;
    const int s = surface.size();
    const double alpha_d = to_double(cf, kAlpha);
    const double ell = std::sqrt(1.0 + alpha_d * alpha_d);

    OrbitStats st;
    st.time_per_square.assign(s, 0.0);
    st.grid = grid;
    if (grid > 0) st.cell_time.assign((size_t)s * grid * grid, 0.0);

    // square entered when a trajectory leaves through the top of square j
    // (streets wrap top to bottom, so a height-1 street re-enters itself)
    std::vector<int> above(s);
    for (int j = 0; j < s; ++j) {
        const std::vector<int>& run = surface.streets[surface.street_of[j]];
        above[j] = run[(surface.level_of[j] + 1) % run.size()];
    }

    const std::vector<Piece>& pieces = T.pieces();
    const size_t np = pieces.size();
    std::vector<double> lo_d(np), shift_d(np);
    for (size_t i = 0; i < np; ++i) {
        lo_d[i] = to_double(cf, pieces[i].lo);
        shift_d[i] = to_double(cf, pieces[i].shift);
    }

    constexpr double kGuard = 1e-7;  // double-shadow safety margin
    LinForm x = x0;
    double xd = to_double(cf, x);
    int prev_sq = -1;

    for (long long step = 0; step < crossings; ++step) {
        long long i = (long long)(std::upper_bound(lo_d.begin(), lo_d.end(), xd) -
                                  lo_d.begin()) -
                      1;
        double next_lo = (i + 1 < (long long)np) ? lo_d[i + 1] : (double)s;
        bool safe = i >= 0 && xd - lo_d[i] > kGuard && next_lo - xd > kGuard;
        if (!safe) {
            i = T.piece_index(x);
            if (x == pieces[i].lo && !(i == 0 && T.zero_continuous()))
                throw SingularHit("geodesic hits a cone point", step);
            xd = to_double(cf, x);
        }

        // the occupied square is floor(x); a piece can straddle an integer
        // boundary when the routing is continuous across it (e.g. b = alpha),
        // so the piece index alone does not determine the square
        double fl = std::floor(xd);
        int j = (xd - fl > kGuard && fl + 1.0 - xd > kGuard)
                    ? (int)fl
                    : (int)cf.floor_of(x).convert_to<long long>();
        double y = xd - j;
        double tcross = (1.0 - y) / alpha_d;  // horizontal distance to the street top
        if (tcross < 1.0) {
            st.time_per_square[j] += ell * tcross;
            st.time_per_square[above[j]] += ell * (1.0 - tcross);
        } else {
            st.time_per_square[j] += ell;
        }
        st.total_time += ell;
        ++st.crossings;
        if (step > 0 && j != prev_sq) ++st.gate_crossings;
        prev_sq = j;

        if (grid > 0) {
            // walk the segment (t, y + t*alpha), t in [0,1), splitting at
            // vertical strip boundaries k/g and height-bin crossings m/g
            const double g = grid;
            long long m = (long long)std::floor(y * g) + 1;
            const long long m1 = (long long)std::floor((y + alpha_d) * g);
            long long k = 1;
            double prev = 0.0;
            while (prev < 1.0) {
                double xs = (k < grid) ? k / g : 1.0;
                double xh = (m <= m1) ? ((double)m / g - y) / alpha_d : 1.0;
                double nxt = std::min({xs, xh, 1.0});
                if (nxt > prev) {
                    double xm = 0.5 * (prev + nxt);
                    double hm = y + xm * alpha_d;
                    int sq = j;
                    if (hm >= 1.0) {
                        sq = above[j];
                        hm -= 1.0;
                    }
                    int xb = std::min((int)(xm * g), grid - 1);
                    int hb = std::min(std::max((int)(hm * g), 0), grid - 1);
                    st.cell_time[((size_t)sq * grid + xb) * grid + hb] +=
                        ell * (nxt - prev);
                }
                prev = nxt;
                if (nxt >= 1.0) break;
                if (nxt == xs) ++k;
                if (nxt == xh) ++m;
            }
        }

        x += pieces[i].shift;
        xd += shift_d[i];
        if ((step & 0xfff) == 0xfff) xd = to_double(cf, x);  // kill shadow drift
    }

    // the final arrival counts as a square change too
    if (crossings > 0) {
        int final_sq = (int)cf.floor_of(x).convert_to<long long>();
        if (final_sq != prev_sq) ++st.gate_crossings;
    }
    return st;
}

long long psi_count(const ContinuedFraction& cf, const LinForm& tau, const LinForm& b,
                    long long N) {
    long long count = 0;
    LinForm t = cf.frac_of(tau);
    for (long long q = 0; q < N; ++q) {
        if (t != b && cf.less(t, b)) ++count;
        t = cf.frac_of(t + kAlpha);
    }
    return count;
}

long long psi_closed_gate_alpha(const ContinuedFraction& cf, const LinForm& tau,
                                long long N) {
    if (N < 2) throw PreconditionViolated("psi closed form needs N >= 2");
    LinForm t = cf.frac_of(tau);
    LinForm arg = t + LinForm(Rat(0), Rat(N - 1));
    bool below = t != kAlpha && cf.less(t, kAlpha);
    Int r = below ? ceil_of(cf, arg) : cf.floor_of(arg);
    return r.convert_to<long long>();
}

namespace {

// Count of a subsequence with M terms, first term t in [0,1) and common gap
// b: ceil(t + (M-1)b) when t starts below the gate, floor of the same
// otherwise.  A one-term subsequence is counted directly, since the ceiling
// form undercounts when t is exactly 0.
long long psi_subsequence(const ContinuedFraction& cf, const LinForm& t,
                          const LinForm& b, long long M) {
    bool below = t != b && cf.less(t, b);
    if (M == 1) return below ? 1 : 0;
    LinForm arg = t + b * Rat(M - 1);
    return (below ? ceil_of(cf, arg) : cf.floor_of(arg)).convert_to<long long>();
}

}  // namespace

long long psi_closed_gate_two_alpha(const ContinuedFraction& cf, long long N) {
    if (N < 2) throw PreconditionViolated("psi closed form needs N >= 2");
    LinForm b = cf.frac_of(LinForm(Rat(0), Rat(2)));
    long long m_even = (N - 1) / 2 + 1;  // terms among s_0, s_2, ...
    long long m_odd = (N - 2) / 2 + 1;   // terms among s_1, s_3, ...
    return psi_subsequence(cf, LinForm(), b, m_even) +
           psi_subsequence(cf, kAlpha, b, m_odd);
}

int which_square(const ContinuedFraction& cf, const LinForm& x, const LinForm& b,
                 long long N) {
    return (int)(psi_count(cf, x + kAlpha, b, N) & 1);
}

SymmetricStart symmetry_transform(const ContinuedFraction& cf, const LinForm& x,
                                  const LinForm& b) {
    // substitute alpha = 1 - alpha' into u + v*alpha
    auto flip = [](const LinForm& f) { return LinForm(f.u + f.v, -f.v); };
    SymmetricStart out{one_minus(cf), LinForm(), LinForm()};
    out.start = flip(cf.frac_of(b + LinForm(Rat(1), Rat(0)) - x));
    out.gate = flip(b);
    return out;
}

double discrepancy(const OrbitStats& stats) {
    if (stats.grid <= 0 || stats.total_time <= 0)
        throw PreconditionViolated("discrepancy needs a grid histogram");
    size_t cells = stats.cell_time.size();
    double share = 1.0 / (double)cells;  // each cell has area 1/g^2 out of s
    double worst = 0.0;
    for (double t : stats.cell_time)
        worst = std::max(worst, std::fabs(t / stats.total_time - share));
    return worst;
}

}  // namespace polyflow

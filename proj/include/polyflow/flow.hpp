#pragma once

#include "polyflow/iet.hpp"

namespace polyflow {

// Accumulated statistics of a geodesic run.  Each edge-to-edge segment has
// horizontal span 1 and therefore length sqrt(1 + alpha^2); the time spent
// in a square is that length times the horizontal span inside the square.
struct OrbitStats {
    double total_time = 0;
    std::vector<double> time_per_square;  // one slot per atomic square
    long long crossings = 0;              // edge-to-edge segments traversed
    long long gate_crossings = 0;         // segments that change the square
    int grid = 0;                         // g, or 0 when no histogram kept
    std::vector<double> cell_time;        // square-major g x g time histogram

    double density(int square) const { return time_per_square[square] / total_time; }
};

// Component-wise sum of two runs over the same surface and grid.
OrbitStats merge(const OrbitStats& a, const OrbitStats& b);

// Runs the geodesic from the left-edge point x0 (square floor(x0), height
// frac(x0)) for the given number of crossings.  The iteration is the exact
// interval exchange; a double shadow of the orbit picks the piece when the
// point is comfortably far from every breakpoint, and the exact comparison
// protocol settles the close calls.  Throws SingularHit (carrying the step
// index) if the orbit dies at a cone point.
OrbitStats simulate(const PolysquareSurface& surface, const IntervalExchange& T,
                    const LinForm& x0, long long crossings, int grid = 0);

// Psi(alpha; tau; b; N) = #{0 <= q <= N-1 : {tau + q alpha} in [0, b)},
// counted term by term with exact comparisons.
long long psi_count(const ContinuedFraction& cf, const LinForm& tau, const LinForm& b,
                    long long N);

// Closed form for the gate b = alpha: ceil({tau} + (N-1) alpha) when the
// first term {tau} lies below the gate, floor of the same otherwise.  N >= 2.
long long psi_closed_gate_alpha(const ContinuedFraction& cf, const LinForm& tau,
                                long long N);

// Closed form for tau = 0 and the gate b = {2 alpha}, split over the even
// and odd subsequences.  N >= 2.
long long psi_closed_gate_two_alpha(const ContinuedFraction& cf, long long N);

// Square containing the particle between crossings N and N+1 on the
// 2-square-b surface, for a start at height x on the far left edge of
// square 0: this is the parity of Psi(alpha; x + alpha; b; N).
int which_square(const ContinuedFraction& cf, const LinForm& x, const LinForm& b,
                 long long N);

// Conjugated initial condition pairing alpha-geodesics with
// (1-alpha)-geodesics on the same 2-square-b surface: the start height
// becomes {b + 1 - x}, and every linear form is re-expressed over the new
// slope via alpha = 1 - alpha'.
struct SymmetricStart {
    ContinuedFraction alpha;  // 1 - alpha
    LinForm start;            // {b + 1 - x}, as a form in the new slope
    LinForm gate;             // same gate value, as a form in the new slope
};
SymmetricStart symmetry_transform(const ContinuedFraction& cf, const LinForm& x,
                                  const LinForm& b);

// Max over grid cells of |empirical time share - cell area / surface area|.
double discrepancy(const OrbitStats& stats);

}  // namespace polyflow

#pragma once

#include <vector>

#include "polyflow/surface.hpp"

namespace polyflow {

// One maximal interval on which the discretized alpha-flow acts by a fixed
// translation: T(x) = x + shift for x in [lo, hi).
struct Piece {
    LinForm lo, hi, shift;
};

// The interval exchange transformation T : [0,s) -> [0,s) obtained by
// identifying the left vertical edge of square j with [j, j+1) and
// following the flow of slope alpha to the next left edge.
class IntervalExchange {
  public:
    IntervalExchange(ContinuedFraction cf, int s, std::vector<Piece> pieces);

    const ContinuedFraction& alpha() const { return cf_; }
    int s() const { return s_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::vector<LinForm>& singularities_mod1() const { return singularities_; }

    // Exact piecewise translation.  Throws SingularHit when x sits exactly
    // on a discontinuity of the requested direction (the geodesic through
    // such a point dies at a cone point).
    LinForm apply(const LinForm& x) const;
    LinForm apply_inverse(const LinForm& x) const;

    // Index of the piece whose source interval contains x.
    int piece_index(const LinForm& x) const;

    // Whether T is continuous across the 0/s wrap, so that 0 is a legal
    // orbit point rather than a discontinuity.
    bool zero_continuous() const { return zero_continuous_; }

  private:
    ContinuedFraction cf_;
    int s_;
    std::vector<Piece> pieces_;       // sorted by lo, partition of [0,s)
    std::vector<int> by_image_;       // piece indices sorted by image start
    std::vector<LinForm> singularities_;
    bool zero_continuous_ = false;    // T continuous across the 0/s wrap
};

// Builds T by shooting the flow from every identification breakpoint of
// every street, rather than from a per-surface table.
IntervalExchange build_iet(const PolysquareSurface& surface);

struct OrbitResult {
    std::vector<LinForm> points;   // x_0 .. x_n (n = steps)
    std::vector<int> squares;      // floor(x_i)
    long long steps = 0;
    bool hit_singularity = false;  // truncated by a cone point
};

OrbitResult orbit(const IntervalExchange& T, const LinForm& x0, long long n);

}  // namespace polyflow

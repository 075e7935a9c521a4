#pragma once

#include <string>
#include <vector>

#include "polyflow/cf.hpp"

namespace polyflow {

struct GridCell {
    long long col = 0;
    long long row = 0;
};

// One identified segment of a square's right vertical edge.  A rightward
// geodesic hitting the right edge of the owning square at local height
// y in [lo, hi) continues on the left edge of square `target` at height
// y + offset.  All named constructions have offset zero; the field exists
// because the file format permits shifted identifications.
struct RoutingSegment {
    LinForm lo, hi;
    int target = 0;
    LinForm offset;
};

// Declared b-rational division points {r*b} on the left edge of a square.
struct DivisionDecl {
    int square = 0;
    std::vector<Rat> multipliers;
};

// A flat translation surface tiled by unit squares, with vertical edges
// identified segment-wise (gates and barriers) and horizontal edges
// identified per column: squares stack into maximal vertical runs
// ("streets") whose top edge wraps to their bottom edge.
struct PolysquareSurface {
    explicit PolysquareSurface(ContinuedFraction alpha) : cf(std::move(alpha)) {}

    ContinuedFraction cf;  // decides every exact ordering below
    LinForm gate;          // the gate-size parameter b (zero if unused)

    std::vector<GridCell> squares;
    std::vector<std::vector<RoutingSegment>> routing;  // per square, sorted by lo
    std::vector<DivisionDecl> divisions;

    // derived by finalize()
    std::vector<std::vector<int>> streets;  // square indices bottom to top
    std::vector<int> street_of;
    std::vector<int> level_of;

    int size() const { return (int)squares.size(); }
    void finalize();
};

// w-by-h torus: every right edge passes straight through to the next
// column, wrapping around.
PolysquareSurface make_torus(const ContinuedFraction& cf, long long w, long long h);

// n unit squares in a row; every inter-square edge (with wraparound)
// carries a b-gate at [0, b) and a barrier at [b, 1).
PolysquareSurface make_n_square_b(const ContinuedFraction& cf, long long n, const LinForm& b);

// L-shaped 4-square surface: three squares in the bottom row, one on top
// of the left square.  The left edge of the bottom middle square has
// division points {b, 1 - b/2}; the left edge of the bottom right square
// has {b, 1 - b}.
PolysquareSurface make_L_b(const ContinuedFraction& cf, const LinForm& b);

// Billiard table: a full w-by-h rectangle of unit squares with internal
// vertical walls.  Wall heights are global (may span several rows).
struct WallSpec {
    long long x = 0;  // grid line 1 <= x <= w-1
    LinForm lo, hi;
};
struct BilliardRegion {
    long long width = 0;
    long long height = 0;
    std::vector<WallSpec> walls;
};

// Unfolds the 4-direction billiard flow in the region into 1-direction
// flow on a 2w-by-2h torus carrying the mirrored copies of the walls:
// reflect across the right vertical side, then reflect the image across
// the top horizontal side.  The near side of a wall is identified with
// the far side of its horizontal mirror image.
PolysquareSurface unfold_billiard(const ContinuedFraction& cf, const BilliardRegion& region);

// All invariant violations, empty when the surface is well formed.
std::vector<std::string> validate(const PolysquareSurface& surface);

// Line-oriented surface spec:
//   squares: (0,0) (1,0) ...
//   route: <sq> [<expr>, <expr>) -> <sq> [+ <expr>]
//   divisions: <sq>: r1, r2, ...
// Expressions are linear in the symbols `alpha` and `b` with rational
// coefficients, e.g. "1 - alpha - b/2".
PolysquareSurface parse_surface(const std::string& text, const ContinuedFraction& cf,
                                const LinForm& b);
std::string serialize_surface(const PolysquareSurface& surface);

// Linear expression over {1, alpha, b}; exposed for CLI flag parsing.
LinForm parse_linear_expr(const std::string& text, const LinForm& b);

}  // namespace polyflow

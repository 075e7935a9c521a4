#include <doctest.h>

#include "polyflow/iet.hpp"
#include "test_util.hpp"

using namespace polyflow;
using namespace polyflow::testutil;

namespace {

LinForm lf(const Rat& u, const Rat& v = Rat(0)) { return LinForm(u, v); }

}  // namespace

TEST_CASE("L-shaped surface reproduces the 15-piece exchange table") {
    ContinuedFraction cf = ContinuedFraction::constant(2);  // alpha = sqrt(2) - 1
    Rat b(3, 10);                                           // 0 < b < alpha < 1/2
    IntervalExchange T = build_iet(make_L_b(cf, lf(b)));

    // (lo, hi, shift) with entries u + v*alpha written as (u, v)
    struct Row {
        Rat lo_u, lo_v, hi_u, hi_v, sh_u;
    };
    Rat h = b / 2;
    std::vector<Row> want = {
        {0, 0, 1 - h, -1, 0},      {1 - h, -1, 1, -1, 1},     {1, -1, 1, 0, 2},
        {1, 0, 2 - b, -1, 0},      {2 - b, -1, 2, -1, 1},     {2, -1, Rat(2) + b, -1, 0},
        {Rat(2) + b, -1, 2, 0, -1}, {2, 0, 3 - b, -1, 0},      {3 - b, -1, 3 - h, -1, -1},
        {3 - h, -1, 3, -1, -2},    {3, -1, Rat(3) + b, -1, -3}, {Rat(3) + b, -1, 3, 0, -1},
        {3, 0, 4, -1, 0},          {4, -1, Rat(4) + b, -1, -3}, {Rat(4) + b, -1, 4, 0, -4},
    };
    REQUIRE(T.pieces().size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) {
        CAPTURE(i);
        CHECK(T.pieces()[i].lo == LinForm(want[i].lo_u, want[i].lo_v));
        CHECK(T.pieces()[i].hi == LinForm(want[i].hi_u, want[i].hi_v));
        CHECK(T.pieces()[i].shift == LinForm(want[i].sh_u, Rat(1)));
    }

    // singularities mod 1: 0, 1-alpha-b, 1-alpha-b/2, 1-alpha, 1-alpha+b
    std::vector<LinForm> sing = {lf(0), lf(1 - b, -1), lf(1 - h, -1), lf(1, -1),
                                 lf(1 + b, -1)};
    REQUIRE(T.singularities_mod1().size() == sing.size());
    for (size_t i = 0; i < sing.size(); ++i) CHECK(T.singularities_mod1()[i] == sing[i]);

    // total length is preserved
    LinForm total;
    for (const Piece& p : T.pieces()) total += p.hi - p.lo;
    CHECK(total == lf(4));
}

TEST_CASE("torus exchange is plain rotation") {
    ContinuedFraction cf = ContinuedFraction::constant(2);
    IntervalExchange T = build_iet(make_torus(cf, 1, 1));
    REQUIRE(T.pieces().size() == 2);
    CHECK(T.pieces()[0].shift == LinForm(Rat(0), Rat(1)));
    CHECK(T.pieces()[1].shift == LinForm(Rat(-1), Rat(1)));
    // the wrap at 0 is circularly continuous, so 0 is a legal start
    CHECK(T.apply(lf(0)) == LinForm(Rat(0), Rat(1)));
    CHECK(T.apply_inverse(T.apply(lf(Rat(1, 2)))) == lf(Rat(1, 2)));
}

TEST_CASE("gate at {m alpha} gives the predicted singularities") {
    // alpha = [1,2,2,...] = 1/sqrt(2) > 1/2, b = {2 alpha} = 2 alpha - 1
    ContinuedFraction cf = ContinuedFraction::periodic({1}, {2});
    IntervalExchange T = build_iet(make_n_square_b(cf, 2, LinForm(Rat(-1), Rat(2))));
    // 0, 1 - alpha, {(m-1) alpha} = alpha
    REQUIRE(T.singularities_mod1().size() == 3);
    CHECK(T.singularities_mod1()[0] == lf(0));
    CHECK(T.singularities_mod1()[1] == LinForm(Rat(1), Rat(-1)));
    CHECK(T.singularities_mod1()[2] == LinForm(Rat(0), Rat(1)));
}

TEST_CASE("reduction mod 1 is rotation by alpha") {
    std::mt19937_64 rng(2024);
    std::vector<PolysquareSurface> surfaces;
    ContinuedFraction golden = ContinuedFraction::constant(1);
    ContinuedFraction sqrt2 = ContinuedFraction::constant(2);
    surfaces.push_back(make_L_b(sqrt2, lf(Rat(3, 10))));
    surfaces.push_back(make_n_square_b(golden, 3, lf(Rat(2, 7))));
    surfaces.push_back(make_n_square_b(sqrt2, 2, LinForm(Rat(0), Rat(2))));
    surfaces.push_back(unfold_billiard(sqrt2, {2, 1, {{1, lf(Rat(3, 10)), lf(Rat(1))}}}));
    surfaces.push_back(make_torus(golden, 2, 2));

    for (const PolysquareSurface& surf : surfaces) {
        IntervalExchange T = build_iet(surf);
        const ContinuedFraction& cf = surf.cf;
        int checked = 0;
        while (checked < 300) {
            Rat r((long long)uniform_below(rng, 100000), 100000);
            LinForm x = lf(r * surf.size());
            LinForm y;
            try {
                y = T.apply(x);
            } catch (const SingularHit&) {
                continue;
            }
            CHECK(cf.frac_of(y) == cf.frac_of(x + LinForm(Rat(0), Rat(1))));
            CHECK(T.apply_inverse(y) == x);
            ++checked;
        }
    }
}

TEST_CASE("orbit stays in the invariant half for b = {2 alpha}, alpha < 1/2") {
    ContinuedFraction cf = ContinuedFraction::constant(2);  // sqrt(2) - 1 < 1/2
    IntervalExchange T = build_iet(make_n_square_b(cf, 2, LinForm(Rat(0), Rat(2))));
    // the set [alpha, 1 + alpha) is flow-invariant
    OrbitResult o = orbit(T, lf(Rat(1, 2)), 3000);
    CHECK(o.steps == 3000);
    CHECK(!o.hit_singularity);
    LinForm lo(Rat(0), Rat(1)), hi(Rat(1), Rat(1));
    int inside = 0;
    for (const LinForm& p : o.points)
        if (cf.sign(p - lo) >= 0 && cf.sign(hi - p) > 0) ++inside;
    CHECK(inside == (int)o.points.size());
    // and the complement is hit by orbits started there
    OrbitResult o2 = orbit(T, lf(Rat(1, 5)), 500);
    for (size_t i = 0; i < o2.points.size(); ++i) {
        bool in = cf.sign(o2.points[i] - lo) >= 0 && cf.sign(hi - o2.points[i]) > 0;
        CHECK(!in);
    }
}

TEST_CASE("exact hits on discontinuities are singular") {
    ContinuedFraction cf = ContinuedFraction::constant(2);
    IntervalExchange T = build_iet(make_n_square_b(cf, 2, lf(Rat(3, 10))));
    CHECK_THROWS_AS(T.apply(T.pieces()[1].lo), SingularHit);
    CHECK_THROWS_AS(T.apply(lf(0)), SingularHit);
    LinForm img = T.pieces()[0].lo + T.pieces()[0].shift;
    // the matching image endpoint is singular for the inverse direction
    bool threw = false;
    try {
        T.apply_inverse(img);
    } catch (const SingularHit&) {
        threw = true;
    }
    CHECK(threw);
    CHECK_THROWS_AS(T.apply(lf(Rat(5))), OutOfRange);

    // orbit truncates instead of propagating
    OrbitResult o = orbit(T, T.apply(lf(Rat(1, 2))) - T.pieces()[1].shift, 10);
    (void)o;  // either runs or truncates depending on landing; just exercise it
}

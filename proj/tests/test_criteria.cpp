#include <doctest.h>

#include "polyflow/criteria.hpp"
#include "polyflow/flow.hpp"
#include "test_util.hpp"

using namespace polyflow;

namespace {

const ContinuedFraction kSqrt2 = ContinuedFraction::constant(2);          // 0.4142...
const ContinuedFraction kInvSqrt2 = ContinuedFraction::periodic({1}, {2});  // 0.7071...
// 3 - sqrt(6) = [0; 1, 1, (4, 2)] = 0.5505..., inside (1/2, 2/3)
const ContinuedFraction kMid = ContinuedFraction::periodic({1, 1}, {4, 2});
// a_1 = 5 puts alpha below 1/4
const ContinuedFraction kSmall = ContinuedFraction::periodic({5}, {1, 2});

LinForm lf(const Rat& u, const Rat& v = Rat(0)) { return LinForm(u, v); }

}  // namespace

TEST_CASE("gate-hit count upsilon") {
    CHECK(upsilon(1, kSqrt2) == 0);
    CHECK(upsilon(1, kInvSqrt2) == 0);
    CHECK(upsilon(4, kSmall) == 0);     // alpha < 1/4
    CHECK(upsilon(4, kMid) == 2);       // 1/2 < alpha < 2/3
    CHECK(upsilon(4, kInvSqrt2) == 2);  // 2/3 < alpha < 3/4
    CHECK(upsilon(2, kInvSqrt2) == 1);  // {2 alpha} = 2 alpha - 1 < alpha
    CHECK(upsilon(2, kMid) == 1);
    CHECK(upsilon(2, kSqrt2) == 0);
}

TEST_CASE("gcd criterion") {
    GcdVerdict v = gcd_criterion(2, 2, kSqrt2);
    CHECK(v.upsilon == 0);
    CHECK(v.d == 2);
    CHECK(v.holds);

    v = gcd_criterion(2, 2, kInvSqrt2);
    CHECK(v.d == 1);
    CHECK(!v.holds);

    CHECK(!gcd_criterion(3, 2, kSqrt2).holds);
    CHECK(!gcd_criterion(3, 2, kInvSqrt2).holds);
    CHECK(gcd_criterion(2, 4, kMid).d == 2);
    CHECK(gcd_criterion(3, 3, kSmall).d == 3);  // alpha < 1/3, so upsilon(3) = 0
}

TEST_CASE("double periodic coloring layout") {
    SUBCASE("n = m = d = 2") {
        ColoringSpec c = double_periodic_coloring(2, 2, kSqrt2, 2);
        REQUIRE(c.points.size() == 2);
        CHECK(c.points[0] == lf(0));
        CHECK(c.points[1] == LinForm(Rat(0), Rat(1)));  // alpha
        CHECK(c.order == std::vector<int>{0, 1});
        CHECK(c.nu == 2);  // b = {2 alpha} = 2 alpha sorts last
        // top interval of square 0 is c_1, bottom is c_2; square 1 swaps
        CHECK(c.color_of(0, 1) == 0);
        CHECK(c.color_of(0, 0) == 1);
        CHECK(c.color_of(1, 1) == 1);
        CHECK(c.color_of(1, 0) == 0);
    }

    SUBCASE("n = m = d = 4 repeats the top-left block") {
        // need 4 | upsilon only for invariance, not for the layout itself
        ColoringSpec c = double_periodic_coloring(4, 4, kSmall, 4);
        for (int l = 0; l < 4; ++l)
            for (int j = 0; j < 4; ++j) CHECK(c.color_of(l, j) == ((l + 3 - j) % 4));
    }

    SUBCASE("double periodicity") {
        ColoringSpec c = double_periodic_coloring(4, 8, kSmall, 2);
        for (int l = 0; l < 2; ++l)
            for (int j = 0; j < 6; ++j) {
                CHECK(c.color_of(l + 2, j) == c.color_of(l, j));
                CHECK(c.color_of(l, j + 2) == c.color_of(l, j));
            }
    }

    CHECK_THROWS_AS(double_periodic_coloring(2, 2, kSqrt2, 1), DivisibilityViolated);
    CHECK_THROWS_AS(double_periodic_coloring(3, 2, kSqrt2, 2), DivisibilityViolated);
}

TEST_CASE("flow invariance of the coloring") {
    SUBCASE("n=2, m=2, alpha < 1/2: invariant") {
        ColoringSpec c = double_periodic_coloring(2, 2, kSqrt2, 2);
        PolysquareSurface s = make_n_square_b(kSqrt2, 2, LinForm(Rat(0), Rat(2)));
        InvarianceVerdict v = verify_invariance(c, s, 400, 1);
        CHECK(v.combinatorial);
        CHECK(v.sampled);
        CHECK(v.samples == 400);
    }

    SUBCASE("n=2, m=2, alpha > 1/2: upsilon odd, not invariant") {
        ColoringSpec c = double_periodic_coloring(2, 2, kInvSqrt2, 2);
        PolysquareSurface s = make_n_square_b(kInvSqrt2, 2, LinForm(Rat(-1), Rat(2)));
        InvarianceVerdict v = verify_invariance(c, s, 400, 2);
        CHECK(!v.combinatorial);
        CHECK(!v.sampled);
    }

    SUBCASE("n=2, m=4, alpha in (1/4,1/2): not invariant") {
        ColoringSpec c = double_periodic_coloring(2, 4, kSqrt2, 2);
        PolysquareSurface s =
            make_n_square_b(kSqrt2, 2, kSqrt2.frac_of(LinForm(Rat(0), Rat(4))));
        InvarianceVerdict v = verify_invariance(c, s, 400, 3);
        CHECK(!v.combinatorial);
        CHECK(!v.sampled);
    }
}

TEST_CASE("predicted densities match the invariant-set pictures") {
    LinForm alpha(Rat(0), Rat(1));

    SUBCASE("m=2, alpha < 1/2") {
        ColoringSpec c = double_periodic_coloring(2, 2, kSqrt2, 2);
        auto den = predicted_densities(c, kSqrt2);
        CHECK(den[1][0] == alpha);
        CHECK(den[1][1] == lf(1, -1));
        CHECK(den[0][0] == lf(1, -1));
        CHECK(den[0][1] == alpha);
    }

    SUBCASE("m=4, alpha < 1/4") {
        ColoringSpec c = double_periodic_coloring(2, 4, kSmall, 2);
        auto den = predicted_densities(c, kSmall);
        CHECK(den[1][0] == LinForm(Rat(0), Rat(2)));   // 2 alpha
        CHECK(den[1][1] == LinForm(Rat(1), Rat(-2)));  // 1 - 2 alpha
    }

    SUBCASE("m=4, alpha in (1/2,2/3)") {
        ColoringSpec c = double_periodic_coloring(2, 4, kMid, 2);
        auto den = predicted_densities(c, kMid);
        CHECK(den[1][0] == LinForm(Rat(-2), Rat(4)));  // 4 alpha - 2
        CHECK(den[1][1] == LinForm(Rat(3), Rat(-4)));  // 3 - 4 alpha
    }

    SUBCASE("m=4, alpha in (2/3,3/4)") {
        ColoringSpec c = double_periodic_coloring(2, 4, kInvSqrt2, 2);
        auto den = predicted_densities(c, kInvSqrt2);
        CHECK(den[1][0] == LinForm(Rat(-1), Rat(2)));  // 2 alpha - 1
        CHECK(den[1][1] == LinForm(Rat(2), Rat(-2)));  // 2 - 2 alpha
    }

    SUBCASE("non-invariant colorings are rejected") {
        ColoringSpec c = double_periodic_coloring(2, 2, kInvSqrt2, 2);
        CHECK_THROWS_AS(predicted_densities(c, kInvSqrt2), NotInvariant);
    }

    SUBCASE("each color's densities sum to 1 across the squares") {
        // upsilon(8) = 4 here, so d = 2 gives an invariant coloring on 4 squares
        ColoringSpec c = double_periodic_coloring(4, 8, kMid, 2);
        auto den = predicted_densities(c, kMid);
        LinForm one(Rat(1), Rat(0));
        for (int color = 0; color < 2; ++color) {
            LinForm row;
            for (int l = 0; l < 4; ++l) row += den[color][l];
            CHECK(row == one);
        }
        // the colors tile each square, so a column sums to d/n
        for (int l = 0; l < 4; ++l)
            CHECK(den[0][l] + den[1][l] == lf(Rat(1, 2)));
    }
}

TEST_CASE("simulated densities follow the verdict") {
    SUBCASE("criterion holds: per-square densities match the prediction") {
        ColoringSpec c = double_periodic_coloring(2, 2, kSqrt2, 2);
        auto den = predicted_densities(c, kSqrt2);
        PolysquareSurface s = make_n_square_b(kSqrt2, 2, LinForm(Rat(0), Rat(2)));
        IntervalExchange T = build_iet(s);
        // x = 1/5 lies in interval 0 of square 0, color c_2
        OrbitStats st = simulate(s, T, lf(Rat(1, 5)), 150000);
        double want0 = kSqrt2.approx(den[1][0], Rat(1, 1000000)).mid().convert_to<double>();
        CHECK(st.density(0) == doctest::Approx(want0).epsilon(0.01));
    }

    SUBCASE("criterion fails: densities approach 1/n") {
        // n=2, m=3: gcd(2,3,.) = 1 always
        CHECK(!gcd_criterion(2, 3, kSqrt2).holds);
        PolysquareSurface s =
            make_n_square_b(kSqrt2, 2, kSqrt2.frac_of(LinForm(Rat(0), Rat(3))));
        IntervalExchange T = build_iet(s);
        OrbitStats st = simulate(s, T, lf(Rat(1, 5)), 150000);
        CHECK(st.density(0) == doctest::Approx(0.5).epsilon(0.02));
        CHECK(st.density(1) == doctest::Approx(0.5).epsilon(0.02));
    }
}

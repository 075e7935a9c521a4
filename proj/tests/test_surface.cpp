#include <doctest.h>

#include "polyflow/surface.hpp"
#include "test_util.hpp"

using namespace polyflow;

namespace {

const ContinuedFraction kSqrt2 = ContinuedFraction::constant(2);  // sqrt(2) - 1

LinForm lf(long long un, long long ud, long long vn = 0, long long vd = 1) {
    return LinForm(Rat(un, ud), Rat(vn, vd));
}

}  // namespace

TEST_CASE("linear expression parser") {
    LinForm b(Rat(3, 10), Rat(0));
    CHECK(parse_linear_expr("1 - alpha - b/2", b) == LinForm(Rat(17, 20), Rat(-1)));
    CHECK(parse_linear_expr("2*alpha - 1", b) == LinForm(Rat(-1), Rat(2)));
    CHECK(parse_linear_expr("0.3", b) == LinForm(Rat(3, 10), Rat(0)));
    CHECK(parse_linear_expr("3/10 + (1 - b)/2", b) == LinForm(Rat(13, 20), Rat(0)));
    CHECK(parse_linear_expr("b", LinForm(Rat(-1), Rat(2))) == LinForm(Rat(-1), Rat(2)));
    CHECK_THROWS_AS(parse_linear_expr("alpha*b", LinForm(Rat(0), Rat(1))), Error);
    CHECK_THROWS_AS(parse_linear_expr("1 +", b), Error);
}

TEST_CASE("n-square-b construction and validation") {
    LinForm b(Rat(3, 10), Rat(0));
    PolysquareSurface two = make_n_square_b(kSqrt2, 2, b);
    CHECK(two.size() == 2);
    CHECK(validate(two).empty());
    // both inter-square edges carry a b-gate: segment [0,b) of each right
    // edge leads to the other square, the barrier wraps
    for (int j = 0; j < 2; ++j) {
        REQUIRE(two.routing[j].size() == 2);
        CHECK(two.routing[j][0].target == 1 - j);
        CHECK(two.routing[j][0].hi == b);
        CHECK(two.routing[j][1].target == j);
    }
    CHECK(two.streets.size() == 2);

    PolysquareSurface three = make_n_square_b(kSqrt2, 3, LinForm(Rat(0), Rat(1)));
    CHECK(three.size() == 3);
    CHECK(validate(three).empty());
    CHECK(three.routing[2][0].target == 0);  // wraparound gate

    CHECK_THROWS_AS(make_n_square_b(kSqrt2, 2, LinForm(Rat(3, 2), Rat(0))), InvalidGate);
    CHECK_THROWS_AS(make_n_square_b(kSqrt2, 2, LinForm(Rat(0), Rat(0))), InvalidGate);
}

TEST_CASE("L-shaped surface matches its division-point description") {
    LinForm b(Rat(3, 10), Rat(0));
    PolysquareSurface L = make_L_b(kSqrt2, b);
    CHECK(L.size() == 4);
    CHECK(validate(L).empty());

    // streets: the left column is two squares tall
    CHECK(L.streets.size() == 3);
    CHECK(L.street_of[0] == L.street_of[3]);
    CHECK(L.level_of[3] == 1);

    // left edge of the bottom middle square: breakpoints b and 1 - b/2
    REQUIRE(L.routing[0].size() == 3);
    CHECK(L.routing[0][0].hi == b);
    CHECK(L.routing[0][1].hi == lf(17, 20));
    // left edge of the bottom right square: breakpoints b and 1 - b
    REQUIRE(L.routing[1].size() == 3);
    CHECK(L.routing[1][1].hi == lf(7, 10));

    CHECK_THROWS_AS(make_L_b(kSqrt2, lf(9, 10)), InvalidGate);
    CHECK_THROWS_AS(make_L_b(kSqrt2, lf(1, 2)), InvalidGate);
}

TEST_CASE("validate reports broken surfaces") {
    LinForm b(Rat(3, 10), Rat(0));
    PolysquareSurface s = make_n_square_b(kSqrt2, 2, b);

    SUBCASE("mis-targeted segment breaks the arrival partition") {
        s.routing[0][0].target = 0;
        auto bad = validate(s);
        CHECK(!bad.empty());
    }
    SUBCASE("overlapping segments") {
        s.routing[0][0].hi = lf(2, 5);
        CHECK(!validate(s).empty());
    }
    SUBCASE("offset pushing an image outside the edge") {
        s.routing[0][1].offset = lf(1, 2);
        CHECK(!validate(s).empty());
    }
    SUBCASE("disconnected square set") {
        s.squares[1].col = 5;
        CHECK(!validate(s).empty());
    }
    SUBCASE("bogus division declaration") {
        s.divisions.push_back({0, {Rat(1, 3)}});
        CHECK(!validate(s).empty());
    }
}

TEST_CASE("billiard unfolding") {
    SUBCASE("unit square unfolds to the 2x2 torus") {
        BilliardRegion square{1, 1, {}};
        PolysquareSurface t = unfold_billiard(kSqrt2, square);
        CHECK(t.size() == 4);
        CHECK(validate(t).empty());
        for (int j = 0; j < 4; ++j) {
            REQUIRE(t.routing[j].size() == 1);
            CHECK(t.routing[j][0].target != j);
        }
        CHECK(t.streets.size() == 2);
        CHECK(t.streets[0].size() == 2);
    }

    SUBCASE("double square with a middle wall unfolds to the two-wall torus") {
        LinForm b(Rat(3, 10), Rat(0));
        // wall of length 1-b above the b-gate on the middle edge
        BilliardRegion table{2, 1, {{1, b, LinForm(Rat(1), Rat(0))}}};
        PolysquareSurface t = unfold_billiard(kSqrt2, table);
        CHECK(t.size() == 8);
        CHECK(validate(t).empty());
        // the wall and its vertical mirror merge into one wall crossing the
        // row boundary on lines 1 and 3: row 0 of line 1 carries the gate
        // [0,b) then wall [b,1)
        REQUIRE(t.routing[0].size() == 2);
        CHECK(t.routing[0][0].hi == b);
        CHECK(t.routing[0][0].target == 1);   // gate passes through
        CHECK(t.routing[0][1].target == 3);   // wall side jumps to line 3's far side
        // row 1 of line 1 is wall up to height 1-b = {2 - (1+b)} - 1
        REQUIRE(t.routing[4].size() == 2);
        CHECK(t.routing[4][0].hi == LinForm(Rat(7, 10), Rat(0)));
        CHECK(t.routing[4][0].target == 7);
        CHECK(t.routing[4][1].target == 5);
        // streets are full columns of height 2
        CHECK(t.streets.size() == 4);
        CHECK(t.streets[0].size() == 2);
    }

    SUBCASE("walls must be internal") {
        BilliardRegion bad{2, 1, {{2, lf(0, 1), lf(1, 2)}}};
        CHECK_THROWS_AS(unfold_billiard(kSqrt2, bad), PreconditionViolated);
    }
}

TEST_CASE("surface file format round trip") {
    LinForm b(Rat(3, 10), Rat(0));
    PolysquareSurface L = make_L_b(kSqrt2, b);
    std::string text = serialize_surface(L);
    PolysquareSurface back = parse_surface(text, kSqrt2, b);
    CHECK(back.size() == L.size());
    REQUIRE(back.routing.size() == L.routing.size());
    for (int j = 0; j < L.size(); ++j) {
        REQUIRE(back.routing[j].size() == L.routing[j].size());
        for (size_t i = 0; i < L.routing[j].size(); ++i) {
            CHECK(back.routing[j][i].lo == L.routing[j][i].lo);
            CHECK(back.routing[j][i].hi == L.routing[j][i].hi);
            CHECK(back.routing[j][i].target == L.routing[j][i].target);
            CHECK(back.routing[j][i].offset == L.routing[j][i].offset);
        }
    }
    CHECK(validate(back).empty());

    // a hand-written spec with symbolic gate expressions
    std::string spec =
        "# two squares, wrap-around gates\n"
        "squares: (0,0) (1,0)\n"
        "route: 0 [0, b) -> 1\n"
        "route: 0 [b, 1) -> 0\n"
        "route: 1 [0, b) -> 0\n"
        "route: 1 [b, 1) -> 1\n"
        "divisions: 0: 1\n"
        "divisions: 1: 1\n";
    LinForm gate(Rat(-1), Rat(2));  // b = {2 alpha} = 2 alpha - 1 for alpha > 1/2
    ContinuedFraction big = ContinuedFraction::parse("[1,2,2,2,2,2,2,2,2,2,2,2]");
    PolysquareSurface two = parse_surface(spec, big, gate);
    CHECK(two.size() == 2);
    CHECK(validate(two).empty());
    CHECK(two.routing[0][0].hi == gate);
}

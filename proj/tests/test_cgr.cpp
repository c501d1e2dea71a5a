#include <doctest.h>

#include <cmath>

#include "dance/cgr.hpp"
#include "dance/error.hpp"
#include "test_util.hpp"

using namespace dance;

TEST_CASE("two-step walk") {
    const CgrWalk w = cgr_walk("AC");
    REQUIRE(w.points.size() == 2);
    CHECK(w.start == Point{0.5, 0.5});
    CHECK(w.points[0] == Point{0.5, 0.5});
    CHECK(w.points[1] == Point{0.75, 0.5});

    const FcgrGrid g = fcgr_grid(w, 2);
    CHECK(g.cell(1, 1) == 2);
    CHECK(g.total() == 2);
}

TEST_CASE("general ratio") {
    const CgrWalk w = cgr_walk("P", {.ratio = 0.25, .start = {0.0, 1.0}});
    REQUIRE(w.points.size() == 1);
    CHECK(w.points[0].x == doctest::Approx(0.25));
    CHECK(w.points[0].y == doctest::Approx(0.75));
}

TEST_CASE("upper boundary is clamped into the last cell") {
    CgrWalk w;
    w.points = {{1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}};
    const FcgrGrid g = fcgr_grid(w, 4);
    CHECK(g.cell(3, 3) == 1);
    CHECK(g.cell(0, 0) == 1);
    CHECK(g.cell(3, 0) == 1);
    CHECK(g.total() == 3);
}

TEST_CASE("empty walk") {
    const CgrWalk w = cgr_walk("");
    CHECK(w.points.empty());
    const FcgrGrid g = fcgr_grid(w, 3);
    CHECK(g.counts.size() == 9);
    CHECK(g.total() == 0);
}

TEST_CASE("contraction, containment, prefix and mass") {
    SplitMix64 rng(11);
    const std::string seq = testing::random_residues(rng, 3000);
    for (double ratio : {0.5, 0.3, 0.8}) {
        const CgrParams params{.ratio = ratio, .start = {rng.uniform(), rng.uniform()}};
        const CgrWalk w = cgr_walk(seq, params);
        REQUIRE(w.points.size() == seq.size());
        Point prev = w.start;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const Point c = coordinate_rule(seq[i]);
            const Point p = w.points[i];
            const double before = std::hypot(prev.x - c.x, prev.y - c.y);
            const double after = std::hypot(p.x - c.x, p.y - c.y);
            CHECK(std::fabs(after - (1.0 - ratio) * before) <= 1e-12);
            CHECK((p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0));
            prev = p;
        }
        const CgrWalk prefix = cgr_walk(seq.substr(0, 500), params);
        for (std::size_t i = 0; i < prefix.points.size(); ++i) CHECK(prefix.points[i] == w.points[i]);
        for (std::size_t r : {1, 2, 7, 16, 64}) CHECK(fcgr_grid(w, r).total() == seq.size());
    }
}

TEST_CASE("invalid input") {
    CHECK_THROWS_AS(cgr_walk("AXB"), DataError);
    CHECK_THROWS_AS(cgr_walk("A", {.ratio = 0.0}), DataError);
    CHECK_THROWS_AS(cgr_walk("A", {.ratio = 1.0}), DataError);
    CHECK_THROWS_AS(cgr_walk("A", {.ratio = 0.5, .start = {1.5, 0.0}}), DataError);
    CHECK_THROWS_AS(fcgr_grid(cgr_walk("A"), 0), DataError);
}

TEST_CASE("fcgr csv export") {
    CgrWalk w;
    w.points = {{0.1, 0.1}, {0.9, 0.1}, {0.9, 0.2}, {0.6, 0.9}};
    CHECK(format_fcgr_csv(fcgr_grid(w, 2)) == "1,2\n0,1\n");
}

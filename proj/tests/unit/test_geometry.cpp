#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vortex/errors.hpp"
#include "vortex/geometry.hpp"

using namespace vortex;
using testing::disk_patch;
using testing::regular_polygon;
using testing::unit_square;

namespace {
constexpr double pi = std::numbers::pi;

double lens_area(double d) { return 2.0 * std::acos(d / 2.0) - 0.5 * d * std::sqrt(4.0 - d * d); }

bool inside_convex(const Contour& c, Vec2 x) {
    for (std::size_t i = 0; i < c.size(); ++i)
        if (cross(c.cyclic(i + 1) - c[i], x - c[i]) < 0.0) return false;
    return true;
}
}  // namespace

TEST_CASE("signed area of square and its reversal") {
    CHECK(signed_area(unit_square()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(signed_area(unit_square().reversed()) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("regular 1024-gon area and perimeter against n-gon formulas") {
    const Contour c = regular_polygon(1024);
    const double n = 1024.0;
    CHECK(std::abs(signed_area(c) - 0.5 * n * std::sin(2.0 * pi / n)) < 1e-12);
    CHECK(std::abs(signed_area(c) - pi) < 1e-4);
    CHECK(std::abs(perimeter(c) - 2.0 * n * std::sin(pi / n)) < 1e-12);
    CHECK(std::abs(perimeter(c) - 2.0 * pi) < 1e-4);
    CHECK(perimeter(unit_square()) == doctest::Approx(4.0));
}

TEST_CASE("degenerate contours are rejected") {
    CHECK_THROWS_AS(Contour({{0, 0}, {1, 0}}), InvalidInput);
    CHECK_THROWS_AS(Contour({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), InvalidInput);
    CHECK_THROWS_AS(Contour({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true), InvalidInput);
    CHECK_THROWS_AS(Patch(unit_square().reversed()), InvalidInput);
}

TEST_CASE("moments of square and disks") {
    const Moments sq = moments(Patch(unit_square({-0.5, -0.5})));
    CHECK(sq.mass == doctest::Approx(1.0));
    CHECK(std::abs(sq.first.x) < 1e-15);
    CHECK(std::abs(sq.first.y) < 1e-15);
    CHECK(sq.second == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    const Moments d0 = moments(disk_patch(2048));
    CHECK(std::abs(d0.mass - pi) < 1e-3);
    CHECK(norm(d0.first) < 1e-12);
    CHECK(std::abs(d0.second - pi / 2.0) < 1e-3);

    const Moments d1 = moments(disk_patch(2048, 1.0, {1.0, 0.0}));
    CHECK(std::abs(d1.second - (pi / 2.0 + pi)) < 1e-3);
}

TEST_CASE("moments are translation covariant on random polygons") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Patch p(testing::random_star(rng));
        const Vec2 v{u(rng), u(rng)};
        const Moments a = moments(p);
        const Moments b = moments(p.translated(v));
        CHECK(std::abs(b.mass - a.mass) < 1e-10);
        CHECK(norm(b.first - (a.first + a.mass * v)) < 1e-10);
        CHECK(std::abs(b.second - (a.second + 2.0 * dot(v, a.first) + a.mass * norm2(v))) < 1e-10);
    }
}

TEST_CASE("inertia tensor trace equals second moment") {
    std::mt19937_64 rng(5);
    const Patch p(testing::random_star(rng));
    const InertiaTensor t = inertia_tensor(p);
    CHECK(t.xx + t.yy == doctest::Approx(moments(p).second).epsilon(1e-12));
}

TEST_CASE("membership on the unit disk including the boundary tolerance") {
    const Patch p = disk_patch(1024);
    CHECK(contains(p, {0, 0}) == Membership::inside);
    CHECK(contains(p, {2, 0}) == Membership::outside);
    CHECK(contains(p, {1.0 + 1e-12, 0.0}) == Membership::boundary);
}

TEST_CASE("membership agrees with angle-summation winding number") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 5; ++trial) {
        const Contour c = testing::random_star(rng, 150);
        const Patch p(c);
        int mismatches = 0;
        for (int k = 0; k < 1000; ++k) {
            const Vec2 x{u(rng), u(rng)};
            const Membership m = contains(p, x);
            if (m == Membership::boundary) continue;
            if ((m == Membership::inside) != (testing::winding_number(c, x) != 0)) ++mismatches;
        }
        CHECK(mismatches == 0);
    }
}

TEST_CASE("disk symmetric difference against the lens formula") {
    const Patch p = disk_patch(4096);
    CHECK(std::abs(disk_symmetric_difference(p, {{0, 0}, 1.0})) < 1e-5);
    CHECK(std::abs(disk_symmetric_difference(p, {{3, 0}, 1.0}) - 2.0 * pi) < 1e-3);
    for (double d : {0.01, 0.05, 0.1}) {
        const double oracle = 2.0 * pi - 2.0 * lens_area(d);
        const double got = disk_symmetric_difference(p, {{d, 0}, 1.0});
        CHECK(std::abs(got - oracle) < 1e-5);
        CHECK(std::abs(got - 4.0 * d) / (4.0 * d) < 0.02);
    }
}

TEST_CASE("exact disk clipping of a polygon: square inside, containing and crossing") {
    const Patch sq(unit_square({-0.5, -0.5}));
    CHECK(disk_intersection_area(sq, {{0, 0}, 10.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(disk_intersection_area(sq, {{0, 0}, 0.2}) == doctest::Approx(pi * 0.04).epsilon(1e-14));
    // Circle of radius 0.5 inscribed: the whole disk lies inside the square.
    CHECK(disk_intersection_area(sq, {{0, 0}, 0.5}) == doctest::Approx(pi * 0.25).epsilon(1e-13));
    // Disk centered on a corner covers a quarter.
    CHECK(disk_intersection_area(sq, {{0.5, 0.5}, 0.3}) == doctest::Approx(pi * 0.09 / 4.0).epsilon(1e-13));
    // Disk of radius 0.6: each side cuts a circular segment of half-angle acos(0.5/0.6).
    const double h = std::acos(0.5 / 0.6);
    const double segment = 0.36 * (h - std::sin(h) * std::cos(h));
    CHECK(disk_intersection_area(sq, {{0, 0}, 0.6}) == doctest::Approx(pi * 0.36 - 4.0 * segment).epsilon(1e-13));
}

TEST_CASE("disk symmetric difference is a metric on random inputs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.5, 0.5), rr(0.5, 1.5);
    const Patch p(testing::random_star(rng));
    for (int k = 0; k < 50; ++k) {
        const Disk d1{{u(rng), u(rng)}, rr(rng)};
        const Disk d2{{u(rng), u(rng)}, rr(rng)};
        // |P triangle D1| <= |P triangle D2| + |D2 triangle D1|, the last from a fine disk polygon.
        const double d21 = disk_symmetric_difference(disk_patch(8192, d2.radius, d2.center), d1);
        CHECK(disk_symmetric_difference(p, d1) <= disk_symmetric_difference(p, d2) + d21 + 1e-6);
    }
}

TEST_CASE("zero disk symmetric difference iff clipping equals both areas") {
    const Patch sq(unit_square({-0.5, -0.5}));
    const Disk d{{0, 0}, std::sqrt(1.0 / pi)};
    const double sd = disk_symmetric_difference(sq, d);
    const double clip = disk_intersection_area(sq, d);
    CHECK(sd > 1e-3);
    CHECK((std::abs(clip - 1.0) > 1e-6 || std::abs(clip - pi * d.radius * d.radius) > 1e-6));
}

TEST_CASE("m-fold symmetry defect") {
    CHECK(std::abs(check_mfold_symmetry(Patch(regular_polygon(6)), 3)) < 1e-10);
    CHECK(std::abs(check_mfold_symmetry(disk_patch(1000), 5)) < 1e-9);

    // Square rotated by 120 degrees: midpoint-rule count of points in exactly one of the two.
    const Contour sq = unit_square({-0.5, -0.5});
    const Contour rot = sq.rotated(2.0 * pi / 3.0);
    const int n = 1200;
    const double h = 2.0 / n;
    long count = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec2 x{-1.0 + (i + 0.5) * h, -1.0 + (j + 0.5) * h};
            if (inside_convex(sq, x) != inside_convex(rot, x)) ++count;
        }
    const double oracle = count * h * h;
    const double got = check_mfold_symmetry(Patch(sq), 3);
    CHECK(got > 0.0);
    CHECK(std::abs(got - oracle) < 5e-3);
}

TEST_CASE("symmetric difference of overlapping squares") {
    const Patch a(unit_square());
    const Patch b(unit_square({0.5, 0.25}));
    CHECK(symmetric_difference_area(a, b) == doctest::Approx(2.0 - 2.0 * 0.375).epsilon(1e-13));
    CHECK(symmetric_difference_area(a, a) == doctest::Approx(0.0));
}

TEST_CASE("self-intersection and star-shape detection") {
    CHECK(is_simple(regular_polygon(64)));
    const Contour bowtie({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    CHECK_FALSE(is_simple(bowtie));
    CHECK(is_star_shaped(regular_polygon(64), {0, 0}));
    const Contour ell({{0, 0}, {2, 0}, {2, 0.2}, {0.2, 0.2}, {0.2, 2}, {0, 2}});
    CHECK_FALSE(is_star_shaped(ell, {1.9, 0.1}));
}

TEST_CASE("hausdorff distance between concentric polygons") {
    CHECK(hausdorff_distance(regular_polygon(256, 1.0), regular_polygon(256, 1.1)) ==
          doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("contour csv round trip") {
    std::mt19937_64 rng(3);
    const Contour c = testing::random_star(rng, 40);
    std::stringstream ss;
    write_contour_csv(ss, c);
    const Contour back = read_contour_csv(ss);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(back[i] == c[i]);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vortex/errors.hpp"
#include "vortex/functionals.hpp"
#include "vortex/patch_builder.hpp"

using namespace vortex;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("rankine polygon") {
    const Patch p = rankine(1.0, 1024);
    CHECK(std::abs(area(p) - pi) < 1e-5);
    CHECK(std::abs(moments(p).second - pi / 2.0) < 1e-4);
    CHECK(std::abs(energy_deficit(rankine(2.0, 512), 1e-10)) < 1e-8);
    CHECK_THROWS_AS(rankine(1.0, 8), InvalidInput);
    CHECK_THROWS_AS(rankine(-1.0, 64), InvalidInput);
}

TEST_CASE("kirchhoff ellipse") {
    CHECK(std::abs(area(kirchhoff_ellipse(2.0, 1.0, 1024)) - 2.0 * pi) < 1e-5);
    const Patch a = kirchhoff_ellipse(1.0, 1.0, 256);
    const Patch b = rankine(1.0, 256);
    for (std::size_t i = 0; i < 256; ++i) CHECK(norm(a.boundary()[i] - b.boundary()[i]) < 1e-15);
    CHECK_THROWS_AS(kirchhoff_ellipse(1.0, 2.0, 64), InvalidInput);
}

TEST_CASE("armed patch at desk parameters") {
    const ArmedPatchSpec spec;  // m=3, N=5, gamma=0.05
    const Patch p = armed_patch(spec);
    CHECK(std::abs(area(p) - pi) < 1e-6);
    CHECK(check_mfold_symmetry(p, 3) < 1e-10);
    CHECK(is_simple(p.boundary()));
    CHECK(is_star_shaped(p.boundary(), {0, 0}));
    double rmax = 0.0;
    for (const Vec2& v : p.boundary().vertices()) rmax = std::max(rmax, norm(v));
    CHECK(rmax >= 1.0 + 0.95 * spec.N);
    CHECK(std::abs(rmax - (1.0 + spec.N)) < 1e-6);
    // Node 0 is on the disk halfway between arms.
    const Vec2 v0 = p.boundary()[0];
    CHECK(std::abs(std::atan2(v0.y, v0.x) - pi / 3.0) < 1e-12);
    // Edges are never much shorter than half the resolution.
    CHECK(min_edge_length(p.boundary()) > 0.2 * spec.resolution);
}

TEST_CASE("armed patch is simple, symmetric and star-shaped across a grid") {
    for (double gamma : {0.01, 0.03, 0.05, 0.1, 0.2})
        for (double N : {2.0, 3.0, 5.0, 8.0, 12.0}) {
            ArmedPatchSpec spec;
            spec.gamma = gamma;
            spec.N = N;
            spec.resolution = 0.05;
            const Patch p = armed_patch(spec);
            CHECK(std::abs(area(p) - pi) < 1e-6);
            CHECK(check_mfold_symmetry(p, 3) < 1e-10);
            CHECK(is_simple(p.boundary()));
            CHECK(is_star_shaped(p.boundary(), {0, 0}));
        }
}

TEST_CASE("infeasible arms report the largest feasible gamma") {
    ArmedPatchSpec spec;
    spec.gamma = 10.0;
    try {
        armed_patch(spec);
        FAIL("expected InvalidSpec");
    } catch (const InvalidSpec& e) {
        CHECK(e.max_feasible_gamma() > 0.05);
        CHECK(e.max_feasible_gamma() < 10.0);
        ArmedPatchSpec ok = spec;
        ok.gamma = 0.99 * e.max_feasible_gamma();
        CHECK_NOTHROW(armed_patch(ok));
    }
}

TEST_CASE("random m-fold corpus members are symmetric with area pi") {
    std::mt19937_64 rng(1);
    for (int m = 2; m <= 6; ++m) {
        const Patch p = random_mfold_patch(m, rng);
        CHECK(std::abs(area(p) - pi) < 1e-12);
        CHECK(check_mfold_symmetry(p, m) < 1e-10);
        CHECK(norm(moments(p).first) < 1e-12);
    }
    const Patch c = random_centered_patch(rng);
    CHECK(norm(moments(c).first) < 1e-12);
    CHECK(std::abs(area(c) - pi) < 1e-12);
}

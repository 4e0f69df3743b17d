#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../common/oracles.hpp"
#include "support.hpp"
#include "vortex/errors.hpp"
#include "vortex/functionals.hpp"
#include "vortex/patch_builder.hpp"

using namespace vortex;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("unit disk energy: closed form and Monte Carlo") {
    const double e = pseudo_energy(rankine(1.0, 1024));
    CHECK(std::abs(e - pi / 8.0) < 1e-8);
    const auto mc = oracle::monte_carlo_energy(rankine(1.0, 1024), {}, 10'000'000, 17);
    CHECK(std::abs(e - mc.mean) < 3.0 * mc.standard_error);
}

TEST_CASE("energy scaling law under dilation") {
    const Patch p = kirchhoff_ellipse(1.5, 1.0, 512);
    const double e1 = pseudo_energy(p);
    const double a1 = area(p);
    for (double lam : {0.5, 2.0, 3.0}) {
        const double expected = std::pow(lam, 4) * e1 - std::pow(lam, 4) * std::log(lam) * a1 * a1 / (2.0 * pi);
        CHECK(std::abs(pseudo_energy(p.scaled(lam)) - expected) < 1e-8 * std::abs(expected) + 1e-10);
    }
    const auto mc = oracle::monte_carlo_energy(p.scaled(2.0), {}, 4'000'000, 5);
    CHECK(std::abs(pseudo_energy(p.scaled(2.0)) - mc.mean) < 3.0 * mc.standard_error);
}

TEST_CASE("energy is translation and rotation invariant") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 3; ++trial) {
        const Patch p(testing::random_star(rng));
        const double e = pseudo_energy(p);
        const Vec2 v{u(rng), u(rng)};
        CHECK(std::abs(pseudo_energy(p.translated(v)) - e) < 1e-10);
        const Patch q = p.rotated(u(rng));
        CHECK(std::abs(pseudo_energy(q) - e) < 1e-10);
        CHECK(std::abs(area(q) - area(p)) < 1e-12);
        CHECK(std::abs(moments(q).second - moments(p).second) < 1e-12);
    }
}

TEST_CASE("ellipse energy matches the closed form") {
    CHECK(std::abs(pseudo_energy(kirchhoff_ellipse(2.0, 1.0, 2048)) - oracle::ellipse_energy(2.0, 1.0)) < 1e-6);
}

TEST_CASE("energy deficit: zero for the disk, positive otherwise") {
    const double tol = 1e-10;
    CHECK(std::abs(energy_deficit(rankine(1.0, 1024), tol)) < 2.0 * tol);
    CHECK(std::abs(energy_deficit(rankine(2.0, 512), tol)) < 2.0 * tol * 8.0);
    const Patch ell = kirchhoff_ellipse(std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1024);
    const double d = energy_deficit(ell, tol);
    CHECK(d > 0.0);
    CHECK(std::abs(d - (oracle::ellipse_energy(1.0, 1.0) - oracle::ellipse_energy(std::sqrt(2.0), 1.0 / std::sqrt(2.0)))) <
          1e-5);
    std::mt19937_64 rng(77);
    for (int i = 0; i < 5; ++i) CHECK(energy_deficit(Patch(testing::random_star(rng)), tol) >= -2.0 * tol);
}

TEST_CASE("nearest disk deviation finds translates") {
    for (double d : {0.0, 0.3, 1.7}) {
        const Patch p = rankine(1.0, 1024).translated({d, 0.0});
        const NearestDisk nd = nearest_disk_deviation(p);
        // The polygon itself differs from the disk by a discretization floor.
        const double floor = disk_symmetric_difference(p, {{d, 0.0}, 1.0});
        CHECK(floor < 1e-5);
        CHECK(nd.epsilon <= floor + 1e-12);
        CHECK(std::abs(nd.a.x - d) < 1e-5);
        CHECK(std::abs(nd.a.y) < 1e-5);
        CHECK(nd.converged);
    }
    // A disk far from the origin is still captured by the grid phase.
    const Patch shifted = rankine(0.5, 512).translated({-6.0, 4.0});
    const NearestDisk far = nearest_disk_deviation(shifted);
    CHECK(far.epsilon <= disk_symmetric_difference(shifted, {{-6.0, 4.0}, 0.5}) + 1e-12);
    CHECK(norm(far.a - Vec2{-6.0, 4.0}) < 1e-5);
}

TEST_CASE("nearest disk deviation never exceeds delta") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 5; ++i) {
        const Patch p = Patch(testing::random_star(rng)).translated({0.2, -0.1});
        const NearestDisk nd = nearest_disk_deviation(p);
        CHECK(nd.epsilon <= disk_symmetric_difference(p, {{0, 0}, equal_mass_radius(p)}) + 1e-15);
        CHECK(nd.epsilon >= 0.0);
    }
}

TEST_CASE("radial layer deficit") {
    const Patch disk = rankine(1.0, 1024);
    for (double R : {0.3, 1.0, 1.9}) {
        const LayerDeficit l = radial_layer_deficit(disk, R, 200'000, 3);
        CHECK(std::abs(l.deficit) <= 3.0 * l.standard_error + 1e-12);
    }
    const Patch ell = kirchhoff_ellipse(std::sqrt(2.0), 1.0 / std::sqrt(2.0), 512);
    const LayerDeficit sat = radial_layer_deficit(ell, 4.0, 100'000, 3);
    CHECK(std::abs(sat.deficit) <= 3.0 * sat.standard_error);
    // R/(2 sqrt(mass)) in [1/4, 3/4], i.e. R in [0.89, 2.66] for mass pi.
    for (double R : {1.0, 1.5, 2.0}) {
        const LayerDeficit l = radial_layer_deficit(ell, R, 1'000'000, 9);
        CHECK(l.deficit > 3.0 * l.standard_error);
    }
    CHECK_THROWS_AS(radial_layer_deficit(ell, 1.0, 100), InvalidInput);
}

TEST_CASE("layer reconstruction matches the energy deficit") {
    const LayerCheck d = layer_reconstruction_check(rankine(1.0, 1024), 4.0, 2'000'000, 5);
    CHECK(d.absolute_error < 1e-3);
    const LayerCheck e = layer_reconstruction_check(kirchhoff_ellipse(2.0, 1.0, 512).scaled(1.0 / std::sqrt(2.0)), 4.0,
                                                    4'000'000, 5);
    CHECK(e.discrepancy < 5e-2);
    CHECK_THROWS_AS(layer_reconstruction_check(rankine(1.0, 64), 1.5, 100'000), InvalidInput);
}

TEST_CASE("functional report fields") {
    const Patch p = rankine(1.0, 512).translated({0.1, 0.0});
    const FunctionalReport r = functional_report(p);
    CHECK(r.mass == doctest::Approx(pi));
    CHECK(r.center.x == doctest::Approx(0.1 * pi));
    CHECK(r.delta >= r.epsilon);
    CHECK(r.epsilon <= disk_symmetric_difference(p, {{0.1, 0.0}, 1.0}) + 1e-12);
    CHECK(norm(r.epsilon_argmin - Vec2{0.1, 0.0}) < 1e-5);
    CHECK(r.pseudo_energy == doctest::Approx(pi / 8.0).epsilon(1e-6));
}

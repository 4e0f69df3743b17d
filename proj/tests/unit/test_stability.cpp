#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vortex/errors.hpp"
#include "vortex/functionals.hpp"
#include "vortex/patch_builder.hpp"
#include "vortex/stability.hpp"

using namespace vortex;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("m-fold bound: disk is vacuous, armed patch sits between 1/3 and 1") {
    ArmedPatchSpec spec;
    spec.resolution = 0.05;
    std::vector<SymmetricPatch> corpus{{rankine(1.0, 256), 4}, {armed_patch(spec), 3}};
    const InequalityReport r = check_mfold_bound(corpus);
    CHECK(r.violations == 0);
    CHECK(r.status == CheckStatus::ok);
    // The 256-gon is at the discretization floor, where the best disk is the centred one.
    CHECK(r.ratios[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.ratios[1] >= 1.0 / 3.0 - 1e-3);
    CHECK(r.ratios[1] <= 1.0 + 1e-3);
    CHECK(r.min_ratio == std::min(r.ratios[0], r.ratios[1]));
}

TEST_CASE("m-fold bound rejects an asymmetric corpus entry") {
    std::vector<SymmetricPatch> corpus{{rankine(1.0, 256).translated({0.1, 0.0}), 3}};
    CHECK_THROWS_AS(check_mfold_bound(corpus), InvalidInput);
}

TEST_CASE("m-fold bound on random symmetric patches") {
    std::mt19937_64 rng(12);
    std::vector<SymmetricPatch> corpus;
    for (int m = 2; m <= 6; ++m) corpus.push_back({random_mfold_patch(m, rng), m});
    const InequalityReport r = check_mfold_bound(corpus);
    CHECK(r.violations == 0);
    CHECK(r.min_ratio >= 1.0 / 3.0);
    CHECK(r.max_ratio <= 1.0 + 1e-9);
}

TEST_CASE("momentum constant follows the proof chain") {
    const MomentumConstant c = momentum_constant(5.0, 1.0);
    const double K = std::sqrt(pi) + 4.0 / std::sqrt(pi) + 4.0 * std::sqrt(10.0) / pi;
    CHECK(c.small_branch == doctest::Approx(1.0 / (K * K)));
    CHECK(c.large_branch == doctest::Approx(1.0 / (4.0 * pi)));
    CHECK(c.combined() == c.small_branch);
    CHECK_THROWS_AS(momentum_constant(-1.0, 1.0), InvalidInput);
}

TEST_CASE("momentum bound on centred patches and its preconditions") {
    std::mt19937_64 rng(21);
    std::vector<Patch> corpus{rankine(1.0, 256)};
    for (int i = 0; i < 4; ++i) corpus.push_back(random_centered_patch(rng));
    const MomentumReport r = check_momentum_bound(corpus, 5.0);
    CHECK(r.report.violations == 0);
    CHECK(r.report.min_ratio > r.constant.combined());

    const std::vector<Patch> shifted{rankine(1.0, 256).translated({0.01, 0.0})};
    CHECK_THROWS_AS(check_momentum_bound(shifted, 5.0), InvalidInput);
    const std::vector<Patch> heavy{rankine(2.0, 256)};
    CHECK_THROWS_AS(check_momentum_bound(heavy, 5.0), InvalidInput);
}

TEST_CASE("sharpness family satisfies the momentum hypotheses") {
    const Patch p = sharpness_family(0.05);
    const Moments m = moments(p);
    CHECK(norm(m.first) < 1e-8);
    CHECK(std::abs(m.mass - pi) < 1e-6);
    CHECK(m.second < 20.0);
    const double delta = disk_symmetric_difference(p, Disk{{0.0, 0.0}, 1.0});
    const double eps = nearest_disk_deviation(p).epsilon;
    // Shift by 0.05 moves a lens of about 4 * 0.05; the best disk only misses the blob.
    CHECK(delta == doctest::Approx(0.2).epsilon(0.05));
    CHECK(eps == doctest::Approx(2.0 * 0.05 * 0.05).epsilon(0.05));
    CHECK_THROWS_AS(sharpness_family(0.25), InvalidInput);
    CHECK_THROWS_AS(sharpness_family(0.0), InvalidInput);
}

TEST_CASE("line fit recovers an exact line and reports residuals") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.residual_rms < 1e-12);
    CHECK(f.r_squared == doctest::Approx(1.0));
    const std::vector<double> flat{2.0, 2.0};
    CHECK_THROWS_AS(fit_line(flat, flat), InvalidInput);
}

TEST_CASE("energy deficit bound has no sign violations") {
    std::mt19937_64 rng(3);
    std::vector<Patch> corpus{random_mfold_patch(3, rng), random_centered_patch(rng)};
    const EnergyBoundReport r = check_energy_bound(corpus);
    CHECK(r.report.violations == 0);
    for (double d : r.deficits) CHECK(d > 0.0);
    CHECK(r.report.min_ratio > 0.0);
}

TEST_CASE("trajectory monitor: Rankine is inconclusive, a perturbed patch is bounded") {
    RunOptions o;
    o.T = 0.5;
    o.dt = 0.01;
    o.frame_stride = 25;
    o.energy_stride = 0;
    const RunResult disk = run(rankine(1.0, 256), {}, o);
    const MonitorReport a = monitor_trajectory(disk.frames);
    CHECK(a.report.status == CheckStatus::inconclusive);

    std::mt19937_64 rng(6);
    const RunResult star = run(random_mfold_patch(3, rng, 256), {}, o);
    const MonitorReport b = monitor_trajectory(star.frames, 2);
    CHECK(b.report.status == CheckStatus::ok);
    CHECK(b.report.ratios.size() == star.frames.size());
    CHECK(std::isfinite(b.report.max_ratio));
    CHECK(b.deficit0 > 0.0);
    CHECK_THROWS_AS(monitor_trajectory(star.frames, 3), InvalidInput);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vortex/geometry.hpp"

namespace vortex {

struct EnergyEstimate {
    double value = 0.0;
    double error = 0.0;  // quadrature error estimate (absolute)
    std::size_t evaluations = 0;
};

// E = (1/2pi) int int ln(1/|x-y|) over the patch, relative tolerance tol.
// Throws ToleranceNotMet when the cell budget runs out first.
EnergyEstimate pseudo_energy_estimate(const Patch& p, double tol = 1e-10);
double pseudo_energy(const Patch& p, double tol = 1e-10);

// Equal-mass disk radius r* = sqrt(mass / pi).
double equal_mass_radius(const Patch& p);

// E(B(0,r*)) - E(p); the disk is a polygon with at least as many vertices as p (and >= 256),
// integrated by the same routine.
double energy_deficit(const Patch& p, double tol = 1e-10);
EnergyEstimate energy_deficit_estimate(const Patch& p, double tol = 1e-10);

struct NearestDisk {
    double epsilon = 0.0;
    Vec2 a;
    bool converged = true;
    std::size_t evaluations = 0;
};

// inf over a of |Omega triangle B(a, r*)|: grid search with step r*/8 over the bounding box of
// each component, then simplex refinement from the three best starts down to step 1e-6.
NearestDisk nearest_disk_deviation(const Patch& p);

struct LayerDeficit {
    double R = 0.0;
    double deficit = 0.0;
    double standard_error = 0.0;
};

// Monte Carlo pair sample shared across scales R. Pairs in the equal-mass disk and in the
// patch are drawn from the same uniforms (common random numbers), so the paired difference has
// small variance when the patch is close to the disk.
class LayerSampler {
public:
    LayerSampler(const Patch& p, std::size_t pairs, std::uint64_t seed);

    // int int_{E* x E*} 1_{|x-y|<R} - int int_{Omega x Omega} 1_{|x-y|<R}
    LayerDeficit deficit(double R) const;
    std::size_t pairs() const { return n_; }
    double mass() const { return mass_; }
    // Mean and standard error of mass^2 ln(d_Omega / d_disk) over the pairs.
    double log_mean() const { return log_mean_; }
    double log_standard_error() const { return log_se_; }

private:
    std::size_t n_ = 0;
    double mass_ = 0.0;
    std::vector<double> d_disk_, d_patch_, d_max_;  // sorted
    double log_mean_ = 0.0;
    double log_se_ = 0.0;
};

LayerDeficit radial_layer_deficit(const Patch& p, double R, std::size_t samples = 1'000'000,
                                  std::uint64_t seed = 20240611);

struct LayerCheck {
    double layered = 0.0;    // int_0^Rmax deficit(R) dR/R, log-spaced Gauss quadrature in R
    double reference = 0.0;  // 2 pi energy_deficit
    double absolute_error = 0.0;
    double discrepancy = 0.0;  // relative when |reference| >= 1e-3, absolute otherwise
    double standard_error = 0.0;
};

// Requires the patch and B(0, r*) to fit inside B(0, Rmax/2).
LayerCheck layer_reconstruction_check(const Patch& p, double Rmax, std::size_t samples = 10'000'000,
                                      std::uint64_t seed = 20240611);

struct FunctionalReport {
    double mass = 0.0;
    Vec2 center;  // int x omega
    double angular_momentum = 0.0;
    double pseudo_energy = 0.0;
    double perimeter = 0.0;
    double delta = 0.0;    // |Omega triangle B(0, r*)|
    double epsilon = 0.0;  // inf over translations; NaN when not computed
    Vec2 epsilon_argmin;
};

struct ReportOptions {
    bool energy = true;
    bool deviation = true;  // delta always; epsilon only when set
    double energy_tol = 1e-10;
};

FunctionalReport functional_report(const Patch& p, const ReportOptions& options = {});

}  // namespace vortex

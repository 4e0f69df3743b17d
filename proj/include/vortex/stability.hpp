#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vortex/dynamics.hpp"
#include "vortex/geometry.hpp"

namespace vortex {

enum class CheckStatus { ok, violated, inconclusive };
std::string to_string(CheckStatus s);

struct InequalityReport {
    std::string name;
    std::size_t corpus_size = 0;
    std::size_t violations = 0;
    double min_ratio = 0.0;  // smallest LHS / RHS over cases with a nonzero RHS
    double max_ratio = 0.0;
    std::string witness;     // the case attaining min_ratio (or the first violation)
    CheckStatus status = CheckStatus::ok;
    double tolerance = 0.0;  // absolute slack allowed before a case counts as a violation
    std::vector<double> ratios;  // per case; NaN when the RHS vanishes
};

struct SymmetricPatch {
    Patch patch;
    int m = 2;
};

// Minimal epsilon / delta and violations of epsilon >= delta / 3 - tol. Throws InvalidInput
// naming the first case whose m-fold symmetry defect exceeds 1e-6.
InequalityReport check_mfold_bound(std::span<const SymmetricPatch> corpus);

// Slack for one epsilon comparison: three times the simplex step effect (a shift of the disk by
// 1e-6 moves at most 4 r 1e-6 of area) plus the rounding level of the clipping.
double deviation_tolerance(double r);

// Constant produced by the proof chain epsilon >= C delta^2 for mass pi r^2 and second moment
// at most I; the two values come from the case split at epsilon = pi r^2.
struct MomentumConstant {
    double small_branch = 0.0;  // 1 / K^2, K = sqrt(pi) r + 4 r / sqrt(pi) + 4 sqrt(2 I) / (pi r)
    double large_branch = 0.0;  // 1 / (4 pi r^2)
    double combined() const { return small_branch < large_branch ? small_branch : large_branch; }
};
MomentumConstant momentum_constant(double I, double r);

struct MomentumReport {
    InequalityReport report;  // ratios are epsilon / delta^2; violations use the chain constant
    double I = 0.0;
    MomentumConstant constant;  // for r = 1; per-case constants use each case's own r
};

// Requires |center| < 1e-6 and angular momentum <= I for every case (InvalidInput otherwise).
MomentumReport check_momentum_bound(std::span<const Patch> corpus, double I);

// Disk of area pi - delta^2 centred at (delta, 0) plus a small disk of area delta^2 at (-D, 0),
// with D = (pi - delta^2) / delta so the first moment vanishes. 0 < delta < 0.2.
Patch sharpness_family(double delta, std::size_t main_vertices = 4096, std::size_t blob_vertices = 64);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double max_residual = 0.0;
    double slope_standard_error = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
};

// Ordinary least squares y = slope x + intercept; needs two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct SharpnessSweep {
    std::vector<double> parameters;
    std::vector<double> deltas;    // |Omega triangle B(0,1)|
    std::vector<double> epsilons;  // nearest-disk deviation
    LineFit fit;                   // ln epsilon against ln delta
    double min_ratio = 0.0;        // epsilon / delta^2
    double max_ratio = 0.0;
};

SharpnessSweep sharpness_sweep(std::span<const double> parameters);

struct EnergyBoundReport {
    InequalityReport report;  // ratios are energy_deficit / epsilon^2
    std::vector<double> deficits;
    std::vector<double> epsilons;
};

// Sign check of energy_deficit >= C epsilon^2: a violation is a deficit below -2 tol_abs, where
// tol_abs is the quadrature error bound of the two energies.
EnergyBoundReport check_energy_bound(std::span<const Patch> corpus, double energy_tol = 1e-10);

struct MonitorReport {
    InequalityReport report;  // ratios are delta_t^k / deficit_0 per frame
    int exponent = 2;
    double deficit0 = 0.0;
    double deficit0_error = 0.0;
    std::vector<double> times;
    std::vector<double> deltas;
};

// delta_t^exponent / deficit_0 along a run (exponent 2 for m-fold data, 4 for centred data).
// Inconclusive when deficit_0 is below ten times its quadrature error.
MonitorReport monitor_trajectory(std::span<const FlowState> frames, int exponent = 2, double energy_tol = 1e-10);

}  // namespace vortex

#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "vortex/geometry.hpp"

namespace vortex {

// Regular polygon approximating B(0,r), uniformly rescaled so its area is exactly pi r^2.
Patch rankine(double r, std::size_t vertices);

// Ellipse with semi-axes a (along x) and b, area rescaled to pi a b. Nodes sit at uniform
// parameter t in (a cos t, b sin t): in the rotating frame boundary particles advance in t at the
// constant rate ab/(a+b)^2, so this spacing is carried unchanged by the flow.
Patch kirchhoff_ellipse(double a, double b, std::size_t vertices);

enum class ArmProfile { constant };

// Disk of radius slightly below 1 with m thin radial arms of length N and combined area gamma.
// Arm k points along angle 2 pi k / m; each arm has width w = gamma/(m N), a root fillet of
// radius w and a semicircular tip whose apex sits at radius 1 + N.
struct ArmedPatchSpec {
    int m = 3;
    double N = 5.0;
    double gamma = 0.05;
    ArmProfile profile = ArmProfile::constant;
    double resolution = 0.02;  // target vertex spacing
};

ArmProfile parse_arm_profile(const std::string& name);
std::string to_string(ArmProfile profile);

struct ArmedPatchReport {
    double mass = 0.0;
    double angular_momentum = 0.0;
    double momentum_excess = 0.0;  // angular momentum minus pi/2
    double energy_deficit = 0.0;   // NaN when not requested
    double tip_radius = 0.0;
    double disk_radius = 0.0;
    double arm_width = 0.0;
    double symmetry_defect = 0.0;
    std::size_t vertices = 0;
};

// Node 0 sits on the disk at angle pi/m, halfway between the first two arms.
// Throws InvalidSpec (carrying the largest feasible gamma) when arms would overlap.
Patch armed_patch(const ArmedPatchSpec& spec);
// Largest gamma for which the arms fit, holding m and N fixed.
double max_feasible_gamma(int m, double N);
ArmedPatchReport armed_patch_report(const ArmedPatchSpec& spec, const Patch& patch, bool with_deficit = true,
                                    double energy_tol = 1e-9);

// r(theta) = r0 (1 + sum_k a_k cos(m k theta + phi_k)) with |a_k| <= 0.3/k^2, area pi.
Patch random_mfold_patch(int m, std::mt19937_64& rng, std::size_t vertices = 360, int modes = 3);
// Random star-shaped perturbation of the unit disk with all Fourier modes, translated so the
// first moment vanishes and scaled to area pi.
Patch random_centered_patch(std::mt19937_64& rng, std::size_t vertices = 360, int modes = 4, double strength = 0.3);

}  // namespace vortex

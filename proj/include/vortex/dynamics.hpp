#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vortex/functionals.hpp"
#include "vortex/geometry.hpp"

namespace vortex {

// Angular velocity of the Rankine vortex 1_{B(0,1)}, defined by u_* = r mu(r) e_theta being the
// velocity the disk induces: 1/2 inside, 1/(2 r^2) outside.
struct RankineProfile {
    double operator()(double r) const { return r <= 1.0 ? 0.5 : 0.5 / (r * r); }
};
inline constexpr RankineProfile rankine_mu{};

struct VelocitySample {
    Vec2 position;
    Vec2 u;
    double u_r = 0.0;      // u . e_r
    double u_theta = 0.0;  // (u . e_theta) / r, so u = u_r e_r + r u_theta e_theta
};

// Velocity induced by the unit-vorticity region bounded by c (or by the whole patch).
std::vector<VelocitySample> boundary_velocity(const Contour& c, std::span<const Vec2> points);
std::vector<VelocitySample> boundary_velocity(const Patch& p, std::span<const Vec2> points);

// Passive particle in lifted polar coordinates; theta is continuous and unbounded.
struct LiftedMarker {
    std::size_t id = 0;
    double theta = 0.0;
    double r = 1.0;
    double theta0 = 0.0;
    double r0 = 1.0;
    bool exterior = true;  // side of the initial patch
    double weight = 0.0;   // area weight for ensemble norms
    Vec2 position() const;
};

struct Annulus {
    double r_inner = 1.0;
    double r_outer = 2.0;
    std::size_t count = 0;
};

// Uniform markers in each annulus (r = sqrt of a uniform in [r1^2, r2^2]), each weighted by its
// share of the annulus area. Ids are consecutive starting at first_id.
std::vector<LiftedMarker> seed_markers(const Patch& initial, std::span<const Annulus> annuli, std::uint64_t seed,
                                       std::size_t first_id = 0);

struct FlowState {
    double t = 0.0;
    Contour boundary;
    std::vector<LiftedMarker> markers;
    // Lifted polar angle of boundary node 0, carried continuously along the run. Node 0 is
    // never removed by remeshing, so it is a Lagrangian anchor for lifting the boundary.
    double anchor_theta = 0.0;
    FunctionalReport report;
    bool has_energy = false;
    bool has_epsilon = false;
};

FlowState initial_state(const Patch& p, std::vector<LiftedMarker> markers = {});

// Classical RK4 on node positions (Cartesian) and markers (lifted polar).
// Throws CflViolation when dt max|u| > 0.5 min edge length.
FlowState step(const FlowState& state, double dt);

// Largest dt allowed by the CFL guard for the current boundary.
double cfl_dt(const FlowState& state);

struct RemeshOptions {
    double hmin = 0.01;
    double hmax = 0.05;
    // Target spacing is clamp(min(curvature_factor / kappa, sqrt(8 sagitta / kappa)), 2 hmin, hmax);
    // a zero sagitta disables that bound.
    double curvature_factor = 0.15;
    double sagitta = 2.5e-4;
    // New nodes follow a cubic Hermite curve through the edge (linear at corners); when false
    // they sit on the chord and the area is unchanged.
    bool cubic = true;
};

struct RemeshStats {
    std::size_t inserted = 0;
    std::size_t removed = 0;
    double area_change = 0.0;
};

// Splits long edges and merges short ones (area-preserving merge). Node 0 always survives as node 0.
Contour remesh(const Contour& c, const RemeshOptions& options, RemeshStats* stats = nullptr);
Contour remesh(const Contour& c, double hmin, double hmax);

struct RunOptions {
    double T = 10.0;
    double dt = 1e-2;
    std::size_t frame_stride = 100;  // steps between frames
    bool remesh = false;
    RemeshOptions remesh_options;
    std::size_t remesh_stride = 1;  // steps between remesh passes
    std::size_t energy_stride = 1;  // frames between energy evaluations; 0 disables
    std::size_t epsilon_stride = 0; // frames between nearest-disk searches; 0 disables
    double energy_tol = 1e-8;
    bool check_simple = true;
    // Index of the start state within a longer run. When nonzero the start is taken to be a frame
    // that was already emitted: no initial remesh pass and no duplicate frame.
    std::size_t first_frame = 0;
    // Called for every frame as it is produced, including the initial one.
    std::function<void(const FlowState&)> on_frame;
};

struct RunResult {
    std::vector<FlowState> frames;
    bool halted = false;
    std::string diagnostic;
    std::size_t steps = 0;
    RemeshStats remesh_totals;
    // The state that stopped the run (self-intersecting frame or CFL failure), if any.
    std::optional<FlowState> offending;
};

// Integrates from `start` to start.t + T. The step count is ceil(T/dt) and dt is shortened to
// T/steps. The run halts, keeping the frames so far, when a frame self-intersects.
RunResult run(const FlowState& start, const RunOptions& options);
RunResult run(const Patch& initial, std::vector<LiftedMarker> markers, const RunOptions& options);

// Fills mass, moments, perimeter and delta, plus energy and epsilon when asked.
void refresh_report(FlowState& state, bool energy, bool epsilon, double energy_tol);

struct DiagnosticGrid {
    double r_min = 1e-3;      // excluded ball around the origin for the sup scan
    double r_max = 0.0;       // 0 means twice the largest boundary radius
    std::size_t n_r = 160;    // log-spaced radii
    std::size_t n_theta = 256;
};

struct VelocityDiagnostics {
    double eps_tilde = 0.0;         // delta at the state
    double sup_deviation = 0.0;     // sup |u - u_*| on the scan grid
    double sup_u_theta = 0.0;       // sup |u_theta|
    double l2_u_theta = 0.0;        // || u_theta - mu ||_{L2} over A <= |x| <= B
    double l2_u_r_over_r = 0.0;     // || u_r / r ||_{L2} over the same annulus
    double cutoff_inner = 0.0;      // A = eps^{1/2}
    double cutoff_outer = 0.0;      // B = R^6 eps^{-1/2}
    double near_origin_ratio = 0.0; // sup |u(x)|/|x| for |x| <= 0.1
    double far_field_constant = 0.0;// sup |u(x)| (1 + |x|) on the scan grid
};

VelocityDiagnostics velocity_diagnostics(const FlowState& state, const DiagnosticGrid& grid = {});

}  // namespace vortex

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "vortex/dynamics.hpp"

namespace vortex {

// Boundary in lifted polar coordinates over one traversal, starting at node 0 with the state's
// anchor angle. theta has size() + 1 entries; the last repeats node 0 shifted by 2 pi.
struct LiftedBoundary {
    std::vector<double> theta;
    std::vector<double> r;
    std::size_t size() const { return theta.empty() ? 0 : theta.size() - 1; }
    double total_increase() const { return theta.back() - theta.front(); }
};

// Throws InvalidInput when a vertex lies within 1e-6 of the origin or the boundary does not
// wind exactly once around it.
LiftedBoundary lift_boundary(const FlowState& state);
LiftedBoundary lift_boundary(const Contour& c, double anchor_theta);

struct Maximizer {
    int n = 0;  // period index
    double theta = 0.0;
    double r = 0.0;
};

// Relative tolerance for ties at the maximal radius.
inline constexpr double kMaximizerTieTolerance = 1e-9;

// Node of the first maximizer: largest r, ties (relative 1e-9) broken by smallest lifted theta.
std::size_t first_maximizer_node(const LiftedBoundary& lift);
// M^n for n in [n_first, n_last].
std::vector<Maximizer> find_maximizers(const LiftedBoundary& lift, int n_first = 0, int n_last = 0);

struct BucketDecomposition {
    double t = 0.0;
    LiftedBoundary lift;
    std::size_t max_node = 0;
    double r_max = 0.0;
    double theta_m0 = 0.0;  // theta of M^0
    // Polygon of B^0 in (theta, r): boundary piece from M^{-1} to M^0, then up to r = 2 r_max,
    // back along the top and down to M^{-1}.
    std::vector<Vec2> bucket0;
    double theta_lo = 0.0;  // theta range of bucket0
    double theta_hi = 0.0;
    std::map<std::size_t, int> buckets;  // marker id -> N(t), exterior markers only
    std::size_t interior_markers = 0;    // markers currently inside the patch (not assigned)
    std::size_t fallbacks = 0;           // assignments resolved by the theta-interval rule
};

// Lift, maximizers and bucket assignment for every exterior marker of the state.
BucketDecomposition decompose(const FlowState& state);

struct BucketAssignment {
    int n = 0;
    bool exact = true;  // false when no candidate polygon test succeeded (marker on a bucket edge)
};

// Bucket of a marker given in lifted coordinates. Points at or above r_max use the theta
// interval rule N = ceil((theta - theta(M^0)) / 2 pi) (right boundary inclusive).
BucketAssignment locate_bucket(double theta, double r, const BucketDecomposition& d);

// Throws InvalidInput when the marker is not outside the patch of the decomposition's state.
int bucket_index(const LiftedMarker& marker, const FlowState& state, const BucketDecomposition& d);

struct DriftReport {
    std::size_t marker_id = 0;
    std::vector<double> times;
    std::vector<int> series;
    bool truncated = false;  // the marker entered the patch; series stops before that frame
    double truncated_at = 0.0;
    int max_abs_change = 0;    // max |N(t) - N(0)|
    double window = 0.0;       // Delta
    int max_window_change = 0; // max |N(t + Delta) - N(t)| over frames with t + Delta in range
    std::size_t windows = 0;
};

// Window length min(1 + N, 1 / delta0) / 2 used by default for the drift check.
double default_drift_window(double arm_length, double delta0);

// N(t) for one marker along frames (one decomposition per frame, reused across markers).
DriftReport bucket_drift(std::span<const BucketDecomposition> decompositions, std::span<const FlowState> frames,
                         std::size_t marker_id, double window);

// Weighted L2 norm of theta - theta0 - t mu(r) over the marker ensemble.
double shear_norm(const FlowState& state);

struct SpreadBound {
    double spread = 0.0;    // lifted angle range of nodes with r >= r0, minus the trivial 2 pi
    double bound = 0.0;     // max(0, 2 r_in spread - 1)
    double r_in = 0.0;      // distance from the origin to the boundary
    double theta_min = 0.0;
    double theta_max = 0.0;
    std::size_t nodes = 0;  // nodes with r >= r0
};

// Both boundary arcs between the extreme-angle nodes stay outside B(0, r_in) and turn through
// at least `spread` each, so the perimeter is at least 2 r_in spread; the returned bound keeps
// the extra -1 slack of the classical form.
SpreadBound winding_spread_bound(const FlowState& state, double r0);

}  // namespace vortex

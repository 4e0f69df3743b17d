#include "vortex/winding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Crossing-number test; points on an edge may land either way.
bool inside_polygon(const std::vector<Vec2>& poly, const Vec2& q) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > q.y) != (b.y > q.y)) {
            const double x = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (q.x < x) in = !in;
        }
    }
    return in;
}

}  // namespace

LiftedBoundary lift_boundary(const Contour& c, double anchor_theta) {
    const std::size_t n = c.size();
    LiftedBoundary L;
    L.theta.resize(n + 1);
    L.r.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = norm(c[i]);
        if (r < 1e-6) {
            std::ostringstream msg;
            msg << "boundary vertex " << i << " lies within 1e-6 of the origin; the lift is undefined";
            throw InvalidInput(msg.str());
        }
        L.r[i] = r;
    }
    L.r[n] = L.r[0];
    L.theta[0] = anchor_theta;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = c[i];
        const Vec2& b = c.cyclic(i + 1);
        L.theta[i + 1] = L.theta[i] + std::atan2(cross(a, b), dot(a, b));
    }
    const double total = L.total_increase();
    if (std::abs(total - kTwoPi) > 1e-6) {
        std::ostringstream msg;
        msg << "boundary winds " << total / kTwoPi << " times around the origin; expected once";
        throw InvalidInput(msg.str());
    }
    // Close exactly; the summed increments agree with 2 pi to rounding.
    L.theta[n] = L.theta[0] + kTwoPi;
    return L;
}

LiftedBoundary lift_boundary(const FlowState& state) { return lift_boundary(state.boundary, state.anchor_theta); }

std::size_t first_maximizer_node(const LiftedBoundary& lift) {
    const std::size_t n = lift.size();
    double rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) rmax = std::max(rmax, lift.r[i]);
    const double cut = rmax * (1.0 - kMaximizerTieTolerance);
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (lift.r[i] >= cut && (best == n || lift.theta[i] < lift.theta[best])) best = i;
    }
    return best;
}

std::vector<Maximizer> find_maximizers(const LiftedBoundary& lift, int n_first, int n_last) {
    const std::size_t i = first_maximizer_node(lift);
    std::vector<Maximizer> out;
    for (int n = n_first; n <= n_last; ++n) out.push_back({n, lift.theta[i] + kTwoPi * n, lift.r[i]});
    return out;
}

BucketAssignment locate_bucket(double theta, double r, const BucketDecomposition& d) {
    const auto interval = [&] {
        return static_cast<int>(std::ceil((theta - d.theta_m0) / kTwoPi - 1e-12));
    };
    if (r >= d.r_max) return {interval(), true};
    const int lo = static_cast<int>(std::ceil((theta - d.theta_hi) / kTwoPi)) - 1;
    const int hi = static_cast<int>(std::floor((theta - d.theta_lo) / kTwoPi)) + 1;
    for (int n = lo; n <= hi; ++n) {
        if (inside_polygon(d.bucket0, {theta - kTwoPi * n, r})) return {n, true};
    }
    return {interval(), false};
}

BucketDecomposition decompose(const FlowState& state) {
    BucketDecomposition d;
    d.t = state.t;
    d.lift = lift_boundary(state);
    const std::size_t n = d.lift.size();
    d.max_node = first_maximizer_node(d.lift);
    d.r_max = d.lift.r[d.max_node];
    d.theta_m0 = d.lift.theta[d.max_node];

    // C^0 runs from M^{-1} (node i* one period down) forward to M^0.
    const std::size_t i0 = d.max_node;
    d.bucket0.reserve(n + 4);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t j = i0 + k;
        const double th = j < n ? d.lift.theta[j] - kTwoPi : d.lift.theta[j - n];
        d.bucket0.push_back({th, d.lift.r[j % n]});
    }
    const double r_top = 2.0 * d.r_max;
    d.bucket0.push_back({d.theta_m0, r_top});
    d.bucket0.push_back({d.theta_m0 - kTwoPi, r_top});
    d.theta_lo = std::numeric_limits<double>::infinity();
    d.theta_hi = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : d.bucket0) {
        d.theta_lo = std::min(d.theta_lo, v.x);
        d.theta_hi = std::max(d.theta_hi, v.x);
    }

    const Patch patch(state.boundary);
    for (const LiftedMarker& m : state.markers) {
        if (contains(patch, m.position()) != Membership::outside) {
            ++d.interior_markers;
            continue;
        }
        const BucketAssignment a = locate_bucket(m.theta, m.r, d);
        if (!a.exact) ++d.fallbacks;
        d.buckets[m.id] = a.n;
    }
    return d;
}

int bucket_index(const LiftedMarker& marker, const FlowState& state, const BucketDecomposition& d) {
    if (contains(Patch(state.boundary), marker.position()) != Membership::outside) {
        std::ostringstream msg;
        msg << "marker " << marker.id << " is not exterior to the patch";
        throw InvalidInput(msg.str());
    }
    return locate_bucket(marker.theta, marker.r, d).n;
}

double default_drift_window(double arm_length, double delta0) {
    const double scale = delta0 > 0.0 ? std::min(1.0 + arm_length, 1.0 / delta0) : 1.0 + arm_length;
    return 0.5 * scale;
}

DriftReport bucket_drift(std::span<const BucketDecomposition> decompositions, std::span<const FlowState> frames,
                         std::size_t marker_id, double window) {
    if (decompositions.size() != frames.size()) throw InvalidInput("one decomposition per frame is required");
    if (!(window > 0.0)) throw InvalidInput("drift window must be positive");
    DriftReport rep;
    rep.marker_id = marker_id;
    rep.window = window;
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto it = decompositions[k].buckets.find(marker_id);
        if (it == decompositions[k].buckets.end()) {
            rep.truncated = true;
            rep.truncated_at = frames[k].t;
            break;
        }
        rep.times.push_back(frames[k].t);
        rep.series.push_back(it->second);
    }
    if (rep.series.empty()) return rep;
    for (int v : rep.series) rep.max_abs_change = std::max(rep.max_abs_change, std::abs(v - rep.series.front()));
    // Window endpoints are taken at the first frame at or after t + Delta.
    std::size_t j = 0;
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        const double target = rep.times[k] + window - 1e-9;
        j = std::max(j, k);
        while (j < rep.times.size() && rep.times[j] < target) ++j;
        if (j == rep.times.size()) break;
        rep.max_window_change = std::max(rep.max_window_change, std::abs(rep.series[j] - rep.series[k]));
        ++rep.windows;
    }
    return rep;
}

double shear_norm(const FlowState& state) {
    double acc = 0.0;
    for (const LiftedMarker& m : state.markers) {
        const double d = m.theta - m.theta0 - state.t * rankine_mu(m.r);
        acc += m.weight * d * d;
    }
    return std::sqrt(acc);
}

SpreadBound winding_spread_bound(const FlowState& state, double r0) {
    const LiftedBoundary lift = lift_boundary(state);
    SpreadBound s;
    s.r_in = std::numeric_limits<double>::infinity();
    const Contour& c = state.boundary;
    for (std::size_t i = 0; i < c.size(); ++i) {
        // Distance from the origin to edge i.
        const Vec2& a = c[i];
        const Vec2 e = c.cyclic(i + 1) - a;
        const double t = std::clamp(-dot(a, e) / dot(e, e), 0.0, 1.0);
        s.r_in = std::min(s.r_in, norm(a + t * e));
    }
    s.theta_min = std::numeric_limits<double>::infinity();
    s.theta_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lift.size(); ++i) {
        if (lift.r[i] < r0) continue;
        ++s.nodes;
        s.theta_min = std::min(s.theta_min, lift.theta[i]);
        s.theta_max = std::max(s.theta_max, lift.theta[i]);
    }
    if (s.nodes == 0) {
        s.theta_min = s.theta_max = 0.0;
        return s;
    }
    s.spread = std::max(0.0, s.theta_max - s.theta_min - kTwoPi);
    s.bound = std::max(0.0, 2.0 * s.r_in * s.spread - 1.0);
    return s;
}

}  // namespace vortex

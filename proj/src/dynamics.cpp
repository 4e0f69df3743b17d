#include "vortex/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vortex/boundary_integrals.hpp"
#include "vortex/errors.hpp"
#include "vortex/sampling.hpp"

namespace vortex {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_angle(double a) {
    while (a > pi) a -= 2.0 * pi;
    while (a <= -pi) a += 2.0 * pi;
    return a;
}

VelocitySample make_sample(const Vec2& x, const Vec2& u) {
    VelocitySample s;
    s.position = x;
    s.u = u;
    const double r = norm(x);
    if (r > 0.0) {
        const Vec2 er = x / r;
        s.u_r = dot(u, er);
        s.u_theta = dot(u, perp(er)) / r;
    }
    return s;
}

// Polar rates of a marker at lifted (theta, r) moving with Cartesian velocity u.
void polar_rates(double theta, double r, const Vec2& u, double& dtheta, double& dr) {
    const Vec2 er{std::cos(theta), std::sin(theta)};
    dr = dot(u, er);
    dtheta = dot(u, perp(er)) / r;
}

}  // namespace

Vec2 LiftedMarker::position() const { return polar(r, theta); }

std::vector<VelocitySample> boundary_velocity(const Patch& p, std::span<const Vec2> points) {
    const BoundaryTable table(p);
    std::vector<Vec2> u(points.size());
    table.velocities(points, u);
    std::vector<VelocitySample> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = make_sample(points[i], u[i]);
    return out;
}

std::vector<VelocitySample> boundary_velocity(const Contour& c, std::span<const Vec2> points) {
    const BoundaryTable table(c);
    std::vector<Vec2> u(points.size());
    table.velocities(points, u);
    std::vector<VelocitySample> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = make_sample(points[i], u[i]);
    return out;
}

std::vector<LiftedMarker> seed_markers(const Patch& initial, std::span<const Annulus> annuli, std::uint64_t seed,
                                       std::size_t first_id) {
    std::vector<LiftedMarker> out;
    std::size_t id = first_id;
    for (std::size_t k = 0; k < annuli.size(); ++k) {
        const Annulus& a = annuli[k];
        if (!(a.r_inner > 0.0) || !(a.r_outer > a.r_inner)) throw InvalidInput("marker annulus needs 0 < r1 < r2");
        if (a.count == 0) continue;
        auto g = block_generator(seed, k);
        const double r1 = a.r_inner * a.r_inner, r2 = a.r_outer * a.r_outer;
        const double weight = pi * (r2 - r1) / static_cast<double>(a.count);
        for (std::size_t i = 0; i < a.count; ++i) {
            LiftedMarker m;
            m.id = id++;
            m.r = std::sqrt(r1 + (r2 - r1) * unit_uniform(g));
            m.theta = 2.0 * pi * unit_uniform(g);
            m.r0 = m.r;
            m.theta0 = m.theta;
            m.weight = weight;
            m.exterior = contains(initial, m.position()) == Membership::outside;
            out.push_back(m);
        }
    }
    return out;
}

FlowState initial_state(const Patch& p, std::vector<LiftedMarker> markers) {
    if (!p.simply_connected()) throw InvalidInput("dynamics needs a single boundary contour");
    FlowState s;
    s.boundary = p.boundary();
    s.markers = std::move(markers);
    const Vec2 v0 = s.boundary[0];
    if (norm(v0) < 1e-6) throw InvalidInput("boundary node 0 sits at the origin");
    s.anchor_theta = std::atan2(v0.y, v0.x);
    return s;
}

double cfl_dt(const FlowState& state) {
    const auto& v = state.boundary.vertices();
    const BoundaryTable table(state.boundary);
    std::vector<Vec2> u(v.size());
    table.velocities(v, u);
    double umax = 0.0;
    for (const Vec2& w : u) umax = std::max(umax, norm(w));
    return umax > 0.0 ? 0.5 * min_edge_length(state.boundary) / umax : std::numeric_limits<double>::infinity();
}

FlowState step(const FlowState& state, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
    const std::size_t m = state.boundary.size();
    const std::size_t k = state.markers.size();

    std::vector<Vec2> nodes(state.boundary.vertices());
    std::vector<double> mth(k), mr(k);
    for (std::size_t i = 0; i < k; ++i) {
        mth[i] = state.markers[i].theta;
        mr[i] = state.markers[i].r;
    }

    // Stage evaluation: node velocities plus marker polar rates at the given configuration.
    std::vector<Vec2> pts(m + k), u(m + k);
    auto rates = [&](const std::vector<Vec2>& x, const std::vector<double>& th, const std::vector<double>& r,
                     std::vector<Vec2>& dx, std::vector<double>& dth, std::vector<double>& dr) {
        const BoundaryTable table{Contour(x)};
        std::copy(x.begin(), x.end(), pts.begin());
        for (std::size_t i = 0; i < k; ++i) pts[m + i] = polar(r[i], th[i]);
        table.velocities(pts, u);
        dx.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m));
        dth.resize(k);
        dr.resize(k);
        for (std::size_t i = 0; i < k; ++i) polar_rates(th[i], r[i], u[m + i], dth[i], dr[i]);
    };

    std::vector<Vec2> k1x, k2x, k3x, k4x;
    std::vector<double> k1t, k2t, k3t, k4t, k1r, k2r, k3r, k4r;
    rates(nodes, mth, mr, k1x, k1t, k1r);

    double umax = 0.0;
    for (const Vec2& w : k1x) umax = std::max(umax, norm(w));
    const double hmin = min_edge_length(state.boundary);
    if (dt * umax > 0.5 * hmin * (1.0 + 1e-12)) {
        const double required = 0.5 * hmin / umax;
        std::ostringstream msg;
        msg << "CFL violated: dt = " << dt << " exceeds the allowed " << required << " (min spacing " << hmin
            << ", max speed " << umax << ")";
        throw CflViolation(msg.str(), required);
    }

    auto advance = [&](double h, const std::vector<Vec2>& dx, const std::vector<double>& dth,
                       const std::vector<double>& dr, std::vector<Vec2>& x, std::vector<double>& th,
                       std::vector<double>& r) {
        x.resize(m);
        th.resize(k);
        r.resize(k);
        for (std::size_t i = 0; i < m; ++i) x[i] = nodes[i] + h * dx[i];
        for (std::size_t i = 0; i < k; ++i) {
            th[i] = mth[i] + h * dth[i];
            r[i] = mr[i] + h * dr[i];
        }
    };
    std::vector<Vec2> x;
    std::vector<double> th, r;
    advance(0.5 * dt, k1x, k1t, k1r, x, th, r);
    rates(x, th, r, k2x, k2t, k2r);
    advance(0.5 * dt, k2x, k2t, k2r, x, th, r);
    rates(x, th, r, k3x, k3t, k3r);
    advance(dt, k3x, k3t, k3r, x, th, r);
    rates(x, th, r, k4x, k4t, k4r);

    FlowState next;
    next.t = state.t + dt;
    const double w = dt / 6.0;
    std::vector<Vec2> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = nodes[i] + w * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
    next.markers = state.markers;
    for (std::size_t i = 0; i < k; ++i) {
        next.markers[i].theta = mth[i] + w * (k1t[i] + 2.0 * k2t[i] + 2.0 * k3t[i] + k4t[i]);
        next.markers[i].r = mr[i] + w * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
    }
    const Vec2 a = nodes[0], b = out[0];
    next.anchor_theta = state.anchor_theta + wrap_angle(std::atan2(b.y, b.x) - std::atan2(a.y, a.x));
    next.boundary = Contour(std::move(out));
    return next;
}

namespace {

// Turning angle above which a node counts as a corner: no merging there, linear splits only.
constexpr double kCornerTurn = 0.5;

double turn_angle(const Vec2& a, const Vec2& b, const Vec2& d) {
    const Vec2 e1 = b - a, e2 = d - b;
    return std::abs(std::atan2(cross(e1, e2), dot(e1, e2)));
}

}  // namespace

Contour remesh(const Contour& c, const RemeshOptions& o, RemeshStats* stats) {
    if (!(o.hmin > 0.0) || !(o.hmax >= 2.0 * o.hmin)) throw InvalidInput("remesh needs 0 < 2 hmin <= hmax");
    RemeshStats local;

    // Merging: a short edge (a, b) between neighbours p and q is replaced by one node placed on
    // the perpendicular bisector of p q so that the enclosed area is unchanged. Node 0 is kept.
    std::vector<Vec2> kept = c.vertices();
    for (int pass = 0; pass < 8; ++pass) {
        const std::size_t n = kept.size();
        if (n <= 8) break;
        std::vector<Vec2> next;
        next.reserve(n);
        next.push_back(kept[0]);
        std::size_t merged = 0;
        std::size_t i = 1;
        while (i < n) {
            if (i + 1 < n && n - merged > 8 && norm(kept[i + 1] - kept[i]) < o.hmin &&
                turn_angle(next.back(), kept[i], kept[i + 1]) <= kCornerTurn &&
                turn_angle(kept[i], kept[i + 1], kept[(i + 2) % n]) <= kCornerTurn) {
                const Vec2& a = kept[i];
                const Vec2& b = kept[i + 1];
                const Vec2& pv = next.back();
                const Vec2& qv = kept[(i + 2) % n];
                const Vec2 d = qv - pv;
                const double s_old = cross(pv, a) + cross(a, b) + cross(b, qv);
                const Vec2 mid = 0.5 * (pv + qv);
                const Vec2 nrm{-d.y, d.x};
                const double den = cross(nrm, d);
                if (den != 0.0) {
                    const double lambda = (s_old - cross(mid, d)) / den;
                    const Vec2 m = mid + lambda * nrm;
                    if (std::abs(lambda) * norm(nrm) <= 0.25 * norm(d) && norm(m - pv) <= o.hmax &&
                        norm(qv - m) <= o.hmax) {
                        local.area_change += 0.5 * (cross(pv, m) + cross(m, qv) - s_old);
                        next.push_back(m);
                        ++merged;
                        i += 2;
                        continue;
                    }
                }
            }
            next.push_back(kept[i]);
            ++i;
        }
        local.removed += merged;
        kept.swap(next);
        if (merged == 0) break;
    }

    // Insertion: split edges longer than the curvature-based target by linear interpolation.
    const std::size_t k = kept.size();
    std::vector<double> target(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2& a = kept[(i + k - 1) % k];
        const Vec2& b = kept[i];
        const Vec2& d = kept[(i + 1) % k];
        const double turn = std::abs(std::atan2(cross(b - a, d - b), dot(b - a, d - b)));
        const double len = 0.5 * (norm(b - a) + norm(d - b));
        const double kappa = turn / std::max(len, 1e-300);
        double h = kappa > 0.0 ? o.curvature_factor / kappa : o.hmax;
        // Keep the chord sagitta h^2 kappa / 8 below the tolerance, so thin filaments stay resolved.
        if (o.sagitta > 0.0 && kappa > 0.0) h = std::min(h, std::sqrt(8.0 * o.sagitta / kappa));
        target[i] = std::clamp(h, 2.0 * o.hmin, o.hmax);
    }
    // Unit tangent at node i from its two chords, weighted toward the shorter one; corners
    // sharper than kCornerTurn report no tangent and their edges are split linearly.
    auto tangent = [&](std::size_t i, Vec2& t) {
        const Vec2& a = kept[(i + k - 1) % k];
        const Vec2& b = kept[i];
        const Vec2& d = kept[(i + 1) % k];
        const Vec2 e1 = b - a, e2 = d - b;
        const double l1 = norm(e1), l2 = norm(e2);
        if (turn_angle(a, b, d) > kCornerTurn) return false;
        const Vec2 w = (l2 / l1) * e1 + (l1 / l2) * e2;
        t = (1.0 / norm(w)) * w;
        return true;
    };
    std::vector<Vec2> out;
    out.reserve(k + k / 4);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2& a = kept[i];
        const Vec2& b = kept[(i + 1) % k];
        out.push_back(a);
        const double h = std::min(target[i], target[(i + 1) % k]);
        const double len = norm(b - a);
        if (len <= h) continue;
        const std::size_t pieces = static_cast<std::size_t>(std::ceil(len / h));
        Vec2 ta, tb;
        const bool smooth = o.cubic && tangent(i, ta) && tangent((i + 1) % k, tb);
        Vec2 prev = a;
        for (std::size_t j = 1; j < pieces; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(pieces);
            Vec2 x = a + s * (b - a);
            if (smooth) {
                // Cubic Hermite segment with end tangents scaled by the chord length.
                const double s2 = s * s, s3 = s2 * s;
                x = (2 * s3 - 3 * s2 + 1) * a + (s3 - 2 * s2 + s) * len * ta + (-2 * s3 + 3 * s2) * b +
                    (s3 - s2) * len * tb;
            }
            local.area_change += 0.5 * cross(prev, x);
            out.push_back(x);
            prev = x;
        }
        local.area_change += 0.5 * (cross(prev, b) - cross(a, b));
        local.inserted += pieces - 1;
    }
    if (stats) *stats = local;
    return Contour(std::move(out));
}

Contour remesh(const Contour& c, double hmin, double hmax) {
    RemeshOptions o;
    o.hmin = hmin;
    o.hmax = hmax;
    return remesh(c, o);
}

void refresh_report(FlowState& s, bool energy, bool epsilon, double energy_tol) {
    const Patch p(s.boundary);
    ReportOptions o;
    o.energy = energy;
    o.deviation = epsilon;
    o.energy_tol = energy_tol;
    s.report = functional_report(p, o);
    s.has_energy = energy;
    s.has_epsilon = epsilon;
}

RunResult run(const FlowState& start, const RunOptions& o) {
    if (!(o.T > 0.0) || !(o.dt > 0.0) || o.frame_stride == 0 || o.remesh_stride == 0) {
        throw InvalidInput("run needs T > 0, dt > 0 and positive strides");
    }
    RunResult result;
    const std::size_t steps = static_cast<std::size_t>(std::ceil(o.T / o.dt - 1e-9));
    const double dt = o.T / static_cast<double>(steps);

    std::size_t frame_index = o.first_frame;
    auto emit = [&](FlowState& s) {
        const bool energy = o.energy_stride > 0 && frame_index % o.energy_stride == 0;
        const bool eps = o.epsilon_stride > 0 && frame_index % o.epsilon_stride == 0;
        refresh_report(s, energy, eps, o.energy_tol);
        ++frame_index;
        result.frames.push_back(s);
        if (o.on_frame) o.on_frame(result.frames.back());
    };

    FlowState state = start;
    const bool resumed = o.first_frame > 0;
    if (o.remesh && !resumed) {
        // The initial nodes are exact; new ones go on the chords so the initial area is kept.
        RemeshOptions first = o.remesh_options;
        first.cubic = false;
        RemeshStats st;
        state.boundary = remesh(state.boundary, first, &st);
        result.remesh_totals = st;
    }
    if (resumed) {
        ++frame_index;
    } else {
        emit(state);
    }
    for (std::size_t n = 1; n <= steps; ++n) {
        try {
            state = step(state, dt);
        } catch (const CflViolation& e) {
            result.halted = true;
            result.diagnostic = e.what();
            result.offending = state;
            return result;
        }
        result.steps = n;
        if (o.remesh && n % o.remesh_stride == 0) {
            RemeshStats st;
            state.boundary = remesh(state.boundary, o.remesh_options, &st);
            result.remesh_totals.inserted += st.inserted;
            result.remesh_totals.removed += st.removed;
            result.remesh_totals.area_change += st.area_change;
        }
        if (n % o.frame_stride == 0 || n == steps) {
            if (o.check_simple) {
                if (auto hit = find_self_intersection(state.boundary)) {
                    std::ostringstream msg;
                    msg << "boundary self-intersects at t = " << state.t << " (edges " << hit->first << " and "
                        << hit->second << ")";
                    result.halted = true;
                    result.diagnostic = msg.str();
                    result.offending = state;
                    return result;
                }
            }
            emit(state);
        }
    }
    return result;
}

RunResult run(const Patch& initial, std::vector<LiftedMarker> markers, const RunOptions& o) {
    return run(initial_state(initial, std::move(markers)), o);
}

VelocityDiagnostics velocity_diagnostics(const FlowState& state, const DiagnosticGrid& g) {
    const Patch p(state.boundary);
    const BoundaryTable table(p);
    VelocityDiagnostics d;
    d.eps_tilde = disk_symmetric_difference(p, Disk{{0.0, 0.0}, equal_mass_radius(p)});
    double R = 0.0;
    for (const Vec2& v : state.boundary.vertices()) R = std::max(R, norm(v));
    const double r_max = g.r_max > 0.0 ? g.r_max : 2.0 * R;

    auto log_radii = [&](double a, double b) {
        std::vector<double> r(g.n_r);
        for (std::size_t i = 0; i < g.n_r; ++i)
            r[i] = a * std::pow(b / a, (static_cast<double>(i) + 0.5) / static_cast<double>(g.n_r));
        return r;
    };
    auto grid_points = [&](const std::vector<double>& radii) {
        std::vector<Vec2> pts;
        pts.reserve(radii.size() * g.n_theta);
        for (double r : radii)
            for (std::size_t j = 0; j < g.n_theta; ++j)
                pts.push_back(polar(r, 2.0 * pi * (static_cast<double>(j) + 0.5) / static_cast<double>(g.n_theta)));
        return pts;
    };

    {
        // The scan also includes the exact endpoints of the annulus.
        std::vector<double> radii = log_radii(g.r_min, r_max);
        radii.push_back(g.r_min);
        radii.push_back(r_max);
        const std::vector<Vec2> pts = grid_points(radii);
        std::vector<Vec2> u(pts.size());
        table.velocities(pts, u);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r = norm(pts[i]);
            const Vec2 ustar = rankine_mu(r) * perp(pts[i]);
            const VelocitySample s = make_sample(pts[i], u[i]);
            d.sup_deviation = std::max(d.sup_deviation, norm(u[i] - ustar));
            d.sup_u_theta = std::max(d.sup_u_theta, std::abs(s.u_theta));
            d.far_field_constant = std::max(d.far_field_constant, norm(u[i]) * (1.0 + r));
            if (r <= 0.1) d.near_origin_ratio = std::max(d.near_origin_ratio, norm(u[i]) / r);
        }
    }
    {
        const double eps = std::max(d.eps_tilde, 1e-12);
        d.cutoff_inner = std::sqrt(eps);
        d.cutoff_outer = std::pow(std::max(R, 1.0), 6) / std::sqrt(eps);
        const double a = d.cutoff_inner;
        const double b = d.cutoff_outer;
        const std::vector<double> radii = log_radii(a, b);
        const std::vector<Vec2> pts = grid_points(radii);
        std::vector<Vec2> u(pts.size());
        table.velocities(pts, u);
        // dx = r dr dtheta = r^2 d(ln r) dtheta with midpoint weights in ln r.
        const double dlog = std::log(b / a) / static_cast<double>(g.n_r);
        const double dth = 2.0 * pi / static_cast<double>(g.n_theta);
        double s_theta = 0.0, s_r = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r = norm(pts[i]);
            const VelocitySample s = make_sample(pts[i], u[i]);
            const double w = r * r * dlog * dth;
            s_theta += w * (s.u_theta - rankine_mu(r)) * (s.u_theta - rankine_mu(r));
            s_r += w * (s.u_r / r) * (s.u_r / r);
        }
        d.l2_u_theta = std::sqrt(s_theta);
        d.l2_u_r_over_r = std::sqrt(s_r);
    }
    return d;
}

}  // namespace vortex

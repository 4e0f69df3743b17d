#include "vortex/patch_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "vortex/errors.hpp"
#include "vortex/functionals.hpp"

namespace vortex {

namespace {

constexpr double pi = std::numbers::pi;

Contour rescaled_to_area(const Contour& c, double target) { return c.scaled(std::sqrt(target / signed_area(c))); }

// Arm cross-section and root fillet for a given disk radius.
struct ArmGeometry {
    double rho;    // disk radius
    double w;      // arm width
    double f;      // fillet radius
    double s_c;    // axial position of the fillet centers
    double beta;   // polar half-angle of the arm root on the disk
    double tip_c;  // axial position of the tip semicircle center
};

ArmGeometry arm_geometry(int m, double N, double gamma, double rho) {
    ArmGeometry g;
    g.rho = rho;
    g.w = gamma / (m * N);
    g.f = g.w;
    const double h = 0.5 * g.w + g.f;
    g.s_c = std::sqrt(std::max((rho + g.f) * (rho + g.f) - h * h, 0.0));
    g.beta = std::atan2(h, g.s_c);
    g.tip_c = 1.0 + N - 0.5 * g.w;
    return g;
}

double nominal_radius(double gamma) { return std::sqrt(std::max(1.0 - gamma / pi, 0.0)); }

bool feasible(int m, double N, double gamma) {
    if (!(gamma > 0.0) || gamma > 0.5 * pi) return false;
    const ArmGeometry g = arm_geometry(m, N, gamma, nominal_radius(gamma));
    if (2.0 * g.beta > 0.9 * 2.0 * pi / m) return false;
    return g.tip_c > g.s_c + g.w;
}

struct Node {
    Vec2 p;
    bool keep;  // apex and sector start survive the spacing cleanup
};

// Piece counts per primitive are fixed once so that area is smooth in rho during the solve.
struct Counts {
    int arc, fillet, side, tip;
};

Counts piece_counts(const ArmGeometry& g, int m, double res) {
    auto pieces = [res](double len) { return std::max(1, static_cast<int>(std::ceil(len / res))); };
    const double fillet_angle = std::atan2(0.5 * g.w + g.f, -g.s_c) - 0.5 * pi;
    return {pieces(g.rho * (pi / m - g.beta)), pieces(g.f * fillet_angle), pieces(g.tip_c - g.s_c),
            pieces(0.25 * pi * g.w)};
}

// One sector in the local frame where the arm points along +x; angles run from -pi/m to pi/m.
std::vector<Node> sector_nodes(const ArmGeometry& g, int m, const Counts& n) {
    std::vector<Node> out;
    auto arc = [&](Vec2 c, double r, double a0, double a1, int pieces, bool keep_first) {
        for (int i = 0; i < pieces; ++i) {
            const double a = a0 + (a1 - a0) * i / pieces;
            out.push_back({c + polar(r, a), keep_first && i == 0});
        }
    };
    auto segment = [&](Vec2 a, Vec2 b, int pieces) {
        for (int i = 0; i < pieces; ++i) out.push_back({a + (static_cast<double>(i) / pieces) * (b - a), false});
    };
    const double h = 0.5 * g.w + g.f;
    const double hw = 0.5 * g.w;
    arc({}, g.rho, -pi / m, -g.beta, n.arc, true);
    arc({g.s_c, -h}, g.f, std::atan2(h, -g.s_c), 0.5 * pi, n.fillet, false);
    segment({g.s_c, -hw}, {g.tip_c, -hw}, n.side);
    arc({g.tip_c, 0.0}, hw, -0.5 * pi, 0.0, n.tip, false);
    arc({g.tip_c, 0.0}, hw, 0.0, 0.5 * pi, n.tip, true);
    segment({g.tip_c, hw}, {g.s_c, hw}, n.side);
    arc({g.s_c, h}, g.f, -0.5 * pi, std::atan2(-h, -g.s_c), n.fillet, false);
    arc({}, g.rho, g.beta, pi / m, n.arc, false);
    return out;
}

// Drops nodes closer than half the resolution to the previously kept node, so sub-resolution
// tips and fillets collapse instead of producing tiny edges.
std::vector<bool> spacing_mask(const std::vector<Node>& nodes, double res) {
    std::vector<bool> mask(nodes.size(), false);
    std::size_t last = 0;
    mask[0] = true;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (norm(nodes[i].p - nodes[last].p) >= 0.5 * res) {
            mask[i] = true;
            last = i;
        } else if (nodes[i].keep && !nodes[last].keep) {
            mask[last] = false;
            mask[i] = true;
            last = i;
        }
    }
    return mask;
}

Contour assemble(const std::vector<Node>& sector, const std::vector<bool>& mask, int m) {
    std::vector<Vec2> v;
    for (int k = 1; k <= m; ++k) {
        const double phi = 2.0 * pi * k / m;
        const double cs = std::cos(phi), sn = std::sin(phi);
        for (std::size_t i = 0; i < sector.size(); ++i) {
            if (!mask[i]) continue;
            const Vec2& p = sector[i].p;
            v.push_back({cs * p.x - sn * p.y, sn * p.x + cs * p.y});
        }
    }
    return Contour(std::move(v));
}

}  // namespace

Patch rankine(double r, std::size_t vertices) {
    if (!(r > 0.0)) throw InvalidInput("rankine radius must be positive");
    if (vertices < 16) throw InvalidInput("rankine needs at least 16 vertices");
    std::vector<Vec2> v(vertices);
    for (std::size_t i = 0; i < vertices; ++i) v[i] = polar(r, 2.0 * pi * static_cast<double>(i) / vertices);
    return Patch(rescaled_to_area(Contour(std::move(v)), pi * r * r));
}

Patch kirchhoff_ellipse(double a, double b, std::size_t vertices) {
    if (!(b > 0.0) || a < b) throw InvalidInput("ellipse needs a >= b > 0");
    if (vertices < 16) throw InvalidInput("ellipse needs at least 16 vertices");
    std::vector<Vec2> v(vertices);
    for (std::size_t i = 0; i < vertices; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / vertices;
        v[i] = {a * std::cos(t), b * std::sin(t)};
    }
    return Patch(rescaled_to_area(Contour(std::move(v)), pi * a * b));
}

ArmProfile parse_arm_profile(const std::string& name) {
    if (name == "constant") return ArmProfile::constant;
    throw InvalidInput("unknown arm profile '" + name + "' (supported: constant)");
}

std::string to_string(ArmProfile) { return "constant"; }

double max_feasible_gamma(int m, double N) {
    double lo = 0.0, hi = 0.5 * pi;
    if (!feasible(m, N, 1e-12)) return 0.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (feasible(m, N, mid) ? lo : hi) = mid;
    }
    return lo;
}

Patch armed_patch(const ArmedPatchSpec& spec) {
    if (spec.m < 2) throw InvalidInput("armed patch needs m >= 2");
    if (!(spec.N > 0.0)) throw InvalidInput("armed patch needs N > 0");
    if (!(spec.resolution > 0.0)) throw InvalidInput("armed patch needs a positive resolution");
    if (!(spec.gamma > 0.0)) throw InvalidInput("armed patch needs gamma > 0");
    if (!feasible(spec.m, spec.N, spec.gamma)) {
        const double gmax = max_feasible_gamma(spec.m, spec.N);
        throw InvalidSpec("arms overlap or do not fit for gamma = " + std::to_string(spec.gamma) +
                              "; largest feasible gamma is " + std::to_string(gmax),
                          gmax);
    }

    const double rho0 = nominal_radius(spec.gamma);
    const Counts counts = piece_counts(arm_geometry(spec.m, spec.N, spec.gamma, rho0), spec.m, spec.resolution);
    const std::vector<bool> mask =
        spacing_mask(sector_nodes(arm_geometry(spec.m, spec.N, spec.gamma, rho0), spec.m, counts), spec.resolution);

    auto build = [&](double rho) {
        return assemble(sector_nodes(arm_geometry(spec.m, spec.N, spec.gamma, rho), spec.m, counts), mask, spec.m);
    };
    // Safeguarded secant iteration on the disk radius for total area pi; area grows with rho.
    auto excess = [&](double rho) { return signed_area(build(rho)) - pi; };
    double lo = 0.5 * rho0, hi = std::min(1.0, 1.5 * rho0);
    double flo = excess(lo), fhi = excess(hi);
    if (!(flo < 0.0 && fhi > 0.0)) {
        throw InvalidSpec("armed patch area cannot be matched for gamma = " + std::to_string(spec.gamma),
                          max_feasible_gamma(spec.m, spec.N));
    }
    double r1 = rho0;
    for (int it = 0; it < 100; ++it) {
        const double f1 = excess(r1);
        if (std::abs(f1) < 1e-14) break;
        (f1 < 0.0 ? lo : hi) = r1;
        (f1 < 0.0 ? flo : fhi) = f1;
        double next = lo - flo * (hi - lo) / (fhi - flo);
        if (!(next > lo && next < hi) || it % 4 == 3) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15) break;
        r1 = next;
    }
    const Contour c = rescaled_to_area(build(r1), pi);
    return Patch(c);
}

ArmedPatchReport armed_patch_report(const ArmedPatchSpec& spec, const Patch& patch, bool with_deficit,
                                    double energy_tol) {
    ArmedPatchReport r;
    const Moments mo = moments(patch);
    r.mass = mo.mass;
    r.angular_momentum = mo.second;
    r.momentum_excess = mo.second - pi / 2.0;
    r.energy_deficit = with_deficit ? energy_deficit(patch, energy_tol) : std::numeric_limits<double>::quiet_NaN();
    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (const Vec2& v : patch.boundary().vertices()) {
        rmax = std::max(rmax, norm(v));
        rmin = std::min(rmin, norm(v));
    }
    r.tip_radius = rmax;
    r.disk_radius = rmin;
    r.arm_width = spec.gamma / (spec.m * spec.N);
    r.symmetry_defect = check_mfold_symmetry(patch, spec.m);
    r.vertices = patch.vertex_count();
    return r;
}

Patch random_mfold_patch(int m, std::mt19937_64& rng, std::size_t vertices, int modes) {
    if (m < 2) throw InvalidInput("symmetry order must be at least 2");
    vertices = std::max<std::size_t>(vertices / m, 8) * m;
    std::uniform_real_distribution<double> unit(-1.0, 1.0), phase(0.0, 2.0 * pi);
    std::vector<double> a(modes), ph(modes);
    for (int k = 0; k < modes; ++k) {
        a[k] = 0.3 * unit(rng) / ((k + 1.0) * (k + 1.0));
        ph[k] = phase(rng);
    }
    // Nodes are generated on one sector and rotated so the symmetry holds to round-off.
    const std::size_t per = vertices / m;
    std::vector<Vec2> sector(per);
    for (std::size_t i = 0; i < per; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / vertices;
        double r = 1.0;
        for (int k = 0; k < modes; ++k) r += a[k] * std::cos(m * (k + 1) * t + ph[k]);
        sector[i] = polar(r, t);
    }
    std::vector<Vec2> v;
    v.reserve(vertices);
    for (int k = 0; k < m; ++k) {
        const double phi = 2.0 * pi * k / m;
        const double cs = std::cos(phi), sn = std::sin(phi);
        for (const Vec2& p : sector) v.push_back({cs * p.x - sn * p.y, sn * p.x + cs * p.y});
    }
    return Patch(rescaled_to_area(Contour(std::move(v)), pi));
}

Patch random_centered_patch(std::mt19937_64& rng, std::size_t vertices, int modes, double strength) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0), phase(0.0, 2.0 * pi);
    std::vector<double> a(modes), ph(modes);
    for (int k = 0; k < modes; ++k) {
        a[k] = strength * unit(rng) / ((k + 1.0) * (k + 1.0));
        ph[k] = phase(rng);
    }
    std::vector<Vec2> v(vertices);
    for (std::size_t i = 0; i < vertices; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / vertices;
        double r = 1.0;
        for (int k = 0; k < modes; ++k) r += a[k] * std::cos((k + 1) * t + ph[k]);
        v[i] = polar(r, t);
    }
    Contour c(std::move(v));
    const Moments mo = moments(c);
    c = c.translated(-(mo.first / mo.mass));
    return Patch(rescaled_to_area(c, pi));
}

}  // namespace vortex

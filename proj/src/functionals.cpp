#include "vortex/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "vortex/boundary_integrals.hpp"
#include "vortex/errors.hpp"
#include "vortex/nelder_mead.hpp"
#include "vortex/patch_builder.hpp"
#include "vortex/quadrature.hpp"
#include "vortex/sampling.hpp"

namespace vortex {

namespace {
constexpr double pi = std::numbers::pi;
constexpr std::size_t kEnergyCells = 400'000;
}  // namespace

EnergyEstimate pseudo_energy_estimate(const Patch& p, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("energy tolerance must be positive");
    const BoundaryTable table(p);
    std::vector<Triangle> tris;
    for (const auto& c : p.components()) {
        auto t = triangulate(c);
        tris.insert(tris.end(), t.begin(), t.end());
    }
    auto integrand = [&](std::span<const Vec2> x, std::span<double> out) {
        table.log_potentials(x, out);
        for (double& v : out) v *= -1.0 / (2.0 * pi);
    };
    const double a = area(p);
    const QuadratureResult q = integrate_triangles(tris, integrand, 1e-3 * tol * a * a, tol, kEnergyCells);
    if (!q.converged) throw ToleranceNotMet("pseudo-energy quadrature did not reach the tolerance", q.error);
    return {q.value, q.error, q.evaluations};
}

double pseudo_energy(const Patch& p, double tol) { return pseudo_energy_estimate(p, tol).value; }

double equal_mass_radius(const Patch& p) { return std::sqrt(area(p) / pi); }

EnergyEstimate energy_deficit_estimate(const Patch& p, double tol) {
    const Patch disk = rankine(equal_mass_radius(p), std::max<std::size_t>(p.vertex_count(), 256));
    const EnergyEstimate a = pseudo_energy_estimate(disk, tol);
    const EnergyEstimate b = pseudo_energy_estimate(p, tol);
    return {a.value - b.value, a.error + b.error, a.evaluations + b.evaluations};
}

double energy_deficit(const Patch& p, double tol) { return energy_deficit_estimate(p, tol).value; }

NearestDisk nearest_disk_deviation(const Patch& p) {
    const double r = equal_mass_radius(p);
    const double h = r / 8.0;
    NearestDisk out;
    auto f = [&](const std::array<double, 2>& a) { return disk_symmetric_difference(p, Disk{{a[0], a[1]}, r}); };

    std::vector<Vec2> starts{{0.0, 0.0}, moments(p).first / area(p)};
    for (const auto& c : p.components()) {
        const BoundingBox bb = bounding_box(c);
        const int nx = static_cast<int>(std::floor((bb.max.x - bb.min.x) / h)) + 1;
        const int ny = static_cast<int>(std::floor((bb.max.y - bb.min.y) / h)) + 1;
        const double ox = 0.5 * (bb.min.x + bb.max.x - (nx - 1) * h);
        const double oy = 0.5 * (bb.min.y + bb.max.y - (ny - 1) * h);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) starts.push_back({ox + i * h, oy + j * h});
    }
    std::vector<double> values(starts.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = f({starts[i].x, starts[i].y});
    out.evaluations = starts.size();

    std::vector<std::size_t> order(starts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const double at_origin = values[0];
    out.epsilon = values[order[0]];
    out.a = starts[order[0]];
    out.converged = false;
    std::vector<Vec2> used;
    for (std::size_t k = 0; k < order.size() && used.size() < 3; ++k) {
        const Vec2 s = starts[order[k]];
        bool near = false;
        for (const Vec2& u : used) near = near || norm(u - s) < 0.5 * h;
        if (near) continue;
        used.push_back(s);
        const auto res = nelder_mead<2>(f, {s.x, s.y}, h, 1e-6);
        out.evaluations += res.evaluations;
        if (res.value < out.epsilon || (res.value == out.epsilon && res.converged)) {
            out.epsilon = res.value;
            out.a = {res.x[0], res.x[1]};
            out.converged = res.converged;
        }
    }
    if (at_origin < out.epsilon) {
        out.epsilon = at_origin;
        out.a = {};
    }
    return out;
}

LayerSampler::LayerSampler(const Patch& p, std::size_t pairs, std::uint64_t seed) : n_(pairs), mass_(area(p)) {
    if (pairs == 0) throw InvalidInput("layer sampler needs at least one pair");
    const PatchSampler sample(p);
    const double r = equal_mass_radius(p);
    double theta0 = 0.0;
    if (sample.fan()) {
        const Vec2 first = sample(0.0, 1.0) - sample.center();
        theta0 = std::atan2(first.y, first.x);
    }
    auto disk_point = [&](double u1, double u2) { return polar(r * std::sqrt(u2), theta0 + 2.0 * pi * u1); };

    d_disk_.resize(n_);
    d_patch_.resize(n_);
    d_max_.resize(n_);
    constexpr std::size_t kBlock = 1 << 15;
    const std::size_t blocks = (n_ + kBlock - 1) / kBlock;
    std::vector<double> block_sum(blocks), block_sq(blocks);
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        auto g = block_generator(seed, static_cast<std::uint64_t>(b));
        double s = 0.0, sq = 0.0;
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(n_, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            const double u1 = unit_uniform(g), u2 = unit_uniform(g), u3 = unit_uniform(g), u4 = unit_uniform(g);
            const double de = norm(disk_point(u1, u2) - disk_point(u3, u4));
            const double dp = norm(sample(u1, u2) - sample(u3, u4));
            d_disk_[i] = de;
            d_patch_[i] = dp;
            d_max_[i] = std::max(de, dp);
            const double l = std::log(std::max(dp, 1e-300) / std::max(de, 1e-300));
            s += l;
            sq += l * l;
        }
        block_sum[b] = s;
        block_sq[b] = sq;
    }
    double s = 0.0, sq = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        s += block_sum[b];
        sq += block_sq[b];
    }
    const double mean = s / static_cast<double>(n_);
    const double var = std::max(sq / static_cast<double>(n_) - mean * mean, 0.0);
    log_mean_ = mass_ * mass_ * mean;
    log_se_ = mass_ * mass_ * std::sqrt(var / static_cast<double>(n_));
    std::sort(d_disk_.begin(), d_disk_.end());
    std::sort(d_patch_.begin(), d_patch_.end());
    std::sort(d_max_.begin(), d_max_.end());
}

LayerDeficit LayerSampler::deficit(double R) const {
    if (!(R > 0.0)) throw InvalidInput("layer radius must be positive");
    auto frac = [&](const std::vector<double>& d) {
        return static_cast<double>(std::lower_bound(d.begin(), d.end(), R) - d.begin()) / static_cast<double>(n_);
    };
    const double pe = frac(d_disk_);
    const double pp = frac(d_patch_);
    const double pb = frac(d_max_);
    const double var = std::max(pe + pp - 2.0 * pb - (pe - pp) * (pe - pp), 0.0);
    const double m2 = mass_ * mass_;
    return {R, m2 * (pe - pp), m2 * std::sqrt(var / static_cast<double>(n_))};
}

LayerDeficit radial_layer_deficit(const Patch& p, double R, std::size_t samples, std::uint64_t seed) {
    if (samples < 10'000) throw InvalidInput("radial_layer_deficit needs at least 1e4 samples");
    return LayerSampler(p, samples, seed).deficit(R);
}

LayerCheck layer_reconstruction_check(const Patch& p, double Rmax, std::size_t samples, std::uint64_t seed) {
    double reach = equal_mass_radius(p);
    for (const auto& c : p.components())
        for (const Vec2& v : c.vertices()) reach = std::max(reach, norm(v));
    if (!(Rmax > 0.0) || reach > 0.5 * Rmax) throw InvalidInput("patch does not fit inside B(0, Rmax/2)");

    const LayerSampler sampler(p, samples, seed);
    // Substituting R = e^s turns dR/R into ds; below 1e-7 Rmax the deficit is O(R^3) and dropped.
    const double s0 = std::log(1e-7 * Rmax);
    const double s1 = std::log(Rmax);
    constexpr int kPanels = 40;
    const GaussRule& g = gauss_legendre(16);
    double layered = 0.0;
    for (int k = 0; k < kPanels; ++k) {
        const double a = s0 + (s1 - s0) * k / kPanels;
        const double h = (s1 - s0) / kPanels;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            layered += h * g.weights[i] * sampler.deficit(std::exp(a + h * g.nodes[i])).deficit;
    }
    LayerCheck out;
    out.layered = layered;
    out.reference = 2.0 * pi * energy_deficit(p);
    out.absolute_error = std::abs(out.layered - out.reference);
    out.discrepancy = std::abs(out.reference) >= 1e-3 ? out.absolute_error / std::abs(out.reference)
                                                      : out.absolute_error;
    out.standard_error = sampler.log_standard_error();
    return out;
}

FunctionalReport functional_report(const Patch& p, const ReportOptions& options) {
    FunctionalReport r;
    const Moments m = moments(p);
    r.mass = m.mass;
    r.center = m.first;
    r.angular_momentum = m.second;
    r.perimeter = perimeter(p);
    if (options.energy) r.pseudo_energy = pseudo_energy(p, options.energy_tol);
    r.delta = disk_symmetric_difference(p, Disk{{0.0, 0.0}, equal_mass_radius(p)});
    if (options.deviation) {
        const NearestDisk nd = nearest_disk_deviation(p);
        r.epsilon = nd.epsilon;
        r.epsilon_argmin = nd.a;
    } else {
        r.epsilon = std::numeric_limits<double>::quiet_NaN();
        r.epsilon_argmin = {r.epsilon, r.epsilon};
    }
    return r;
}

}  // namespace vortex

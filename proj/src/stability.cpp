#include "vortex/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "vortex/errors.hpp"
#include "vortex/functionals.hpp"
#include "vortex/patch_builder.hpp"

namespace vortex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fills min/max ratio and the witness from the per-case ratios.
void summarize(InequalityReport& r, const std::vector<std::string>& labels) {
    r.min_ratio = std::numeric_limits<double>::infinity();
    r.max_ratio = -std::numeric_limits<double>::infinity();
    std::size_t arg = r.ratios.size();
    for (std::size_t i = 0; i < r.ratios.size(); ++i) {
        const double q = r.ratios[i];
        if (std::isnan(q)) continue;
        if (q < r.min_ratio) {
            r.min_ratio = q;
            arg = i;
        }
        r.max_ratio = std::max(r.max_ratio, q);
    }
    if (arg == r.ratios.size()) {
        r.min_ratio = kNaN;
        r.max_ratio = kNaN;
    } else if (r.witness.empty()) {
        r.witness = labels[arg];
    }
    r.status = r.violations > 0 ? CheckStatus::violated : CheckStatus::ok;
}

}  // namespace

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::ok: return "ok";
        case CheckStatus::violated: return "violated";
        case CheckStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

double deviation_tolerance(double r) { return 3.0 * (4.0 * r * 1e-6 + 1e-12); }

InequalityReport check_mfold_bound(std::span<const SymmetricPatch> corpus) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const double defect = check_mfold_symmetry(corpus[i].patch, corpus[i].m);
        if (!(defect < 1e-6)) {
            std::ostringstream msg;
            msg << "corpus entry " << i << " is not " << corpus[i].m << "-fold symmetric (defect " << defect << ")";
            throw InvalidInput(msg.str());
        }
    }
    InequalityReport r;
    r.name = "mfold";
    r.corpus_size = corpus.size();
    r.ratios.assign(corpus.size(), kNaN);
    std::vector<std::string> labels(corpus.size());
    std::vector<char> bad(corpus.size(), 0);
    std::vector<double> tol(corpus.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Patch& p = corpus[i].patch;
        const double rs = equal_mass_radius(p);
        const double delta = disk_symmetric_difference(p, Disk{{0.0, 0.0}, rs});
        const double eps = nearest_disk_deviation(p).epsilon;
        tol[i] = deviation_tolerance(rs);
        if (delta > 0.0) r.ratios[i] = eps / delta;
        bad[i] = eps < delta / 3.0 - tol[i];
        std::ostringstream s;
        s << "case " << i << " (m=" << corpus[i].m << ", delta=" << delta << ", epsilon=" << eps << ")";
        labels[i] = s.str();
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        r.tolerance = std::max(r.tolerance, tol[i]);
        if (bad[i]) {
            if (r.violations == 0) r.witness = labels[i];
            ++r.violations;
        }
    }
    summarize(r, labels);
    return r;
}

MomentumConstant momentum_constant(double I, double r) {
    if (!(I > 0.0) || !(r > 0.0)) throw InvalidInput("momentum constant needs I > 0 and r > 0");
    const double sp = std::sqrt(kPi);
    const double K = sp * r + 4.0 * r / sp + 4.0 * std::sqrt(2.0 * I) / (kPi * r);
    return {1.0 / (K * K), 1.0 / (4.0 * kPi * r * r)};
}

MomentumReport check_momentum_bound(std::span<const Patch> corpus, double I) {
    MomentumReport out;
    out.I = I;
    out.constant = momentum_constant(I, 1.0);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Moments mo = moments(corpus[i]);
        if (!(norm(mo.first) < 1e-6) || !(mo.second <= I)) {
            std::ostringstream msg;
            msg << "corpus entry " << i << " violates the momentum preconditions (|center| = " << norm(mo.first)
                << ", angular momentum = " << mo.second << ", I = " << I << ")";
            throw InvalidInput(msg.str());
        }
    }
    InequalityReport& r = out.report;
    r.name = "momentum";
    r.corpus_size = corpus.size();
    r.ratios.assign(corpus.size(), kNaN);
    std::vector<std::string> labels(corpus.size());
    std::vector<char> bad(corpus.size(), 0);
    std::vector<double> tol(corpus.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Patch& p = corpus[i];
        const double rs = equal_mass_radius(p);
        const double delta = disk_symmetric_difference(p, Disk{{0.0, 0.0}, rs});
        const double eps = nearest_disk_deviation(p).epsilon;
        const double C = momentum_constant(I, rs).combined();
        tol[i] = deviation_tolerance(rs);
        if (delta > 0.0) r.ratios[i] = eps / (delta * delta);
        bad[i] = eps < C * delta * delta - tol[i];
        std::ostringstream s;
        s << "case " << i << " (delta=" << delta << ", epsilon=" << eps << ", C=" << C << ")";
        labels[i] = s.str();
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        r.tolerance = std::max(r.tolerance, tol[i]);
        if (bad[i]) {
            if (r.violations == 0) r.witness = labels[i];
            ++r.violations;
        }
    }
    summarize(r, labels);
    return out;
}

Patch sharpness_family(double delta, std::size_t main_vertices, std::size_t blob_vertices) {
    if (!(delta > 0.0) || !(delta < 0.2)) {
        throw InvalidInput("sharpness family needs 0 < delta < 0.2 for the construction to stay embedded");
    }
    const double main_area = kPi - delta * delta;
    const double shift = main_area / delta;
    const Patch body = rankine(std::sqrt(main_area / kPi), main_vertices).translated({delta, 0.0});
    const Patch blob = rankine(delta / std::sqrt(kPi), blob_vertices).translated({-shift, 0.0});
    return Patch::from_components({body.boundary(), blob.boundary()});
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw InvalidInput("line fit needs at least two (x, y) pairs");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidInput("line fit needs two distinct x values");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    f.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        f.residuals[i] = e;
        ss += e * e;
        f.max_residual = std::max(f.max_residual, std::abs(e));
    }
    f.residual_rms = std::sqrt(ss / static_cast<double>(n));
    f.slope_standard_error = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
    f.r_squared = syy > 0.0 ? 1.0 - ss / syy : 1.0;
    return f;
}

SharpnessSweep sharpness_sweep(std::span<const double> parameters) {
    SharpnessSweep s;
    s.parameters.assign(parameters.begin(), parameters.end());
    const std::size_t n = parameters.size();
    s.deltas.resize(n);
    s.epsilons.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Patch p = sharpness_family(parameters[i]);
        s.deltas[i] = disk_symmetric_difference(p, Disk{{0.0, 0.0}, equal_mass_radius(p)});
        s.epsilons[i] = nearest_disk_deviation(p).epsilon;
    }
    std::vector<double> lx(n), ly(n);
    s.min_ratio = std::numeric_limits<double>::infinity();
    s.max_ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(s.deltas[i]);
        ly[i] = std::log(s.epsilons[i]);
        const double q = s.epsilons[i] / (s.deltas[i] * s.deltas[i]);
        s.min_ratio = std::min(s.min_ratio, q);
        s.max_ratio = std::max(s.max_ratio, q);
    }
    s.fit = fit_line(lx, ly);
    return s;
}

EnergyBoundReport check_energy_bound(std::span<const Patch> corpus, double energy_tol) {
    EnergyBoundReport out;
    InequalityReport& r = out.report;
    r.name = "energy";
    r.corpus_size = corpus.size();
    r.ratios.assign(corpus.size(), kNaN);
    out.deficits.resize(corpus.size());
    out.epsilons.resize(corpus.size());
    std::vector<double> errors(corpus.size());
    std::vector<std::string> labels(corpus.size());
    // Each energy quadrature is already parallel inside; the corpus loop stays sequential.
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const EnergyEstimate d = energy_deficit_estimate(corpus[i], energy_tol);
        const double eps = nearest_disk_deviation(corpus[i]).epsilon;
        out.deficits[i] = d.value;
        out.epsilons[i] = eps;
        errors[i] = d.error;
        if (eps > 0.0) r.ratios[i] = d.value / (eps * eps);
        std::ostringstream s;
        s << "case " << i << " (deficit=" << d.value << ", epsilon=" << eps << ")";
        labels[i] = s.str();
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const double slack = 2.0 * errors[i];
        r.tolerance = std::max(r.tolerance, slack);
        if (out.deficits[i] < -slack) {
            if (r.violations == 0) r.witness = labels[i];
            ++r.violations;
        }
    }
    summarize(r, labels);
    return out;
}

MonitorReport monitor_trajectory(std::span<const FlowState> frames, int exponent, double energy_tol) {
    if (frames.empty()) throw InvalidInput("trajectory monitor needs at least one frame");
    if (exponent != 2 && exponent != 4) throw InvalidInput("trajectory exponent must be 2 or 4");
    MonitorReport out;
    out.exponent = exponent;
    const EnergyEstimate d0 = energy_deficit_estimate(Patch(frames.front().boundary), energy_tol);
    out.deficit0 = d0.value;
    out.deficit0_error = d0.error;
    InequalityReport& r = out.report;
    r.name = exponent == 2 ? "trajectory-mfold" : "trajectory-momentum";
    r.corpus_size = frames.size();
    r.tolerance = d0.error;
    std::vector<std::string> labels(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const double delta = frames[k].report.delta;
        out.times.push_back(frames[k].t);
        out.deltas.push_back(delta);
        r.ratios.push_back(d0.value > 0.0 ? std::pow(delta, exponent) / d0.value : kNaN);
        std::ostringstream s;
        s << "frame " << k << " (t=" << frames[k].t << ", delta=" << delta << ")";
        labels[k] = s.str();
    }
    summarize(r, labels);
    if (!(d0.value > 10.0 * d0.error)) r.status = CheckStatus::inconclusive;
    return out;
}

}  // namespace vortex

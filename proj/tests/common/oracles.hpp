#pragma once

// Independent reference computations used by the unit and acceptance tests. None of these go
// through the boundary-integral kernel or the adaptive quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "vortex/geometry.hpp"

namespace oracle {

using vortex::Contour;
using vortex::Patch;
using vortex::Vec2;

struct Estimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

// Uniform points in a patch via area-weighted fan triangles about `center` (the patch must be
// star-shaped about it). Points inside a triangle use the square-root barycentric map.
class FanSampler {
public:
    FanSampler(const Patch& p, Vec2 center) : center_(center) {
        for (const auto& c : p.components()) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                const Vec2 a = c[i], b = c.cyclic(i + 1);
                total_ += 0.5 * vortex::cross(a - center, b - center);
                cdf_.push_back(total_);
                a_.push_back(a);
                b_.push_back(b);
            }
        }
    }
    template <class G>
    Vec2 operator()(G& g) const {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double t = u(g) * total_;
        std::size_t i = std::upper_bound(cdf_.begin(), cdf_.end(), t) - cdf_.begin();
        i = std::min(i, cdf_.size() - 1);
        const double r1 = std::sqrt(u(g)), r2 = u(g);
        return (1.0 - r1) * center_ + r1 * (1.0 - r2) * a_[i] + r1 * r2 * b_[i];
    }
    double area() const { return total_; }

private:
    Vec2 center_;
    double total_ = 0.0;
    std::vector<double> cdf_;
    std::vector<Vec2> a_, b_;
};

// E = (1/2pi) int int ln(1/|x-y|) by plain Monte Carlo over independent pairs.
inline Estimate monte_carlo_energy(const Patch& p, Vec2 center, std::size_t samples, std::uint64_t seed) {
    const FanSampler s(p, center);
    std::mt19937_64 g(seed);
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double l = -std::log(vortex::norm(s(g) - s(g)));
        sum += l;
        sq += l * l;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double k = s.area() * s.area() / (2.0 * std::numbers::pi);
    return {k * mean, k * std::sqrt(var / n)};
}

// Closed-form energy of an ellipse with semi-axes a, b: (A^2/2pi)(1/4 - ln((a+b)/2)).
inline double ellipse_energy(double a, double b) {
    const double area = std::numbers::pi * a * b;
    return area * area / (2.0 * std::numbers::pi) * (0.25 - std::log(0.5 * (a + b)));
}

// Area of the lens B(0,1) cap B((d,0),1).
inline double lens_area(double d) { return 2.0 * std::acos(d / 2.0) - 0.5 * d * std::sqrt(4.0 - d * d); }

// Least-squares slope and intercept of y against x, with the residual RMS.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        r += e * e;
    }
    f.residual_rms = std::sqrt(r / n);
    return f;
}

}  // namespace oracle

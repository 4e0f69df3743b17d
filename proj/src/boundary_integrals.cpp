// Compiled with -ffast-math so the per-node log/atan2 loops vectorize through libmvec.
#include "vortex/boundary_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vortex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTiny = 1e-300;

struct Scratch {
    std::vector<double> dx, dy, lr, ph;
    void resize(std::size_t n) {
        if (dx.size() < n) {
            dx.resize(n);
            dy.resize(n);
            lr.resize(n);
            ph.resize(n);
        }
    }
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

}  // namespace

BoundaryTable::BoundaryTable(const Patch& p) { build(p.components()); }

BoundaryTable::BoundaryTable(const Contour& c) { build({c}); }

void BoundaryTable::build(const std::vector<Contour>& components) {
    offsets_.push_back(0);
    for (const auto& c : components) {
        const std::size_t m = c.size();
        for (std::size_t i = 0; i <= m; ++i) {
            const Vec2& a = c.cyclic(i);
            const Vec2& b = c.cyclic(i + 1);
            xs_.push_back(a.x);
            ys_.push_back(a.y);
            const double ex = b.x - a.x;
            const double ey = b.y - a.y;
            ex_.push_back(i < m ? ex : 0.0);
            ey_.push_back(i < m ? ey : 0.0);
            inv_len2_.push_back(i < m ? 1.0 / (ex * ex + ey * ey) : 0.0);
        }
        offsets_.push_back(xs_.size());
    }
}

namespace {

// Fills per-node offsets, log squared distances and polar angles for nodes [lo, hi).
inline void node_pass(const double* xs, const double* ys, std::size_t lo, std::size_t hi, double px, double py,
                      Scratch& s) {
    double* dx = s.dx.data();
    double* dy = s.dy.data();
    double* lr = s.lr.data();
    double* ph = s.ph.data();
#pragma omp simd
    for (std::size_t j = lo; j < hi; ++j) {
        const double ddx = xs[j] - px;
        const double ddy = ys[j] - py;
        dx[j] = ddx;
        dy[j] = ddy;
        lr[j] = std::log(std::max(ddx * ddx + ddy * ddy, kTiny));
        ph[j] = std::atan2(ddy, ddx);
    }
}

inline double wrap_angle(double a) {
    a = a > std::numbers::pi ? a - kTwoPi : a;
    return a < -std::numbers::pi ? a + kTwoPi : a;
}

}  // namespace

Vec2 BoundaryTable::velocity(const Vec2& x) const {
    Scratch& s = scratch();
    s.resize(xs_.size());
    double sx = 0.0, sy = 0.0;
    const double* ex = ex_.data();
    const double* ey = ey_.data();
    const double* il2 = inv_len2_.data();
    for (std::size_t k = 0; k + 1 < offsets_.size(); ++k) {
        const std::size_t lo = offsets_[k];
        const std::size_t hi = offsets_[k + 1];
        const std::size_t last = hi - 1;
        node_pass(xs_.data(), ys_.data(), lo, hi, x.x, x.y, s);
        const double* dx = s.dx.data();
        const double* dy = s.dy.data();
        const double* lr = s.lr.data();
        const double* ph = s.ph.data();
#pragma omp simd reduction(+ : sx, sy)
        for (std::size_t j = lo; j < last; ++j) {
            const double ang = wrap_angle(ph[j + 1] - ph[j]);
            const double c = dx[j] * ey[j] - dy[j] * ex[j];
            const double sb = dx[j + 1] * ex[j] + dy[j + 1] * ey[j];
            const double sa = dx[j] * ex[j] + dy[j] * ey[j];
            const double g = (0.5 * (sb * lr[j + 1] - sa * lr[j]) + c * ang) * il2[j];
            sx += g * ex[j];
            sy += g * ey[j];
        }
    }
    // The "-|e|" part of each segment integral sums to zero around a closed contour.
    return {-sx / kTwoPi, -sy / kTwoPi};
}

double BoundaryTable::log_potential(const Vec2& x) const {
    Scratch& s = scratch();
    s.resize(xs_.size());
    double acc = 0.0;
    const double* ex = ex_.data();
    const double* ey = ey_.data();
    const double* il2 = inv_len2_.data();
    for (std::size_t k = 0; k + 1 < offsets_.size(); ++k) {
        const std::size_t lo = offsets_[k];
        const std::size_t hi = offsets_[k + 1];
        const std::size_t last = hi - 1;
        node_pass(xs_.data(), ys_.data(), lo, hi, x.x, x.y, s);
        const double* dx = s.dx.data();
        const double* dy = s.dy.data();
        const double* lr = s.lr.data();
        const double* ph = s.ph.data();
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = lo; j < last; ++j) {
            const double ang = wrap_angle(ph[j + 1] - ph[j]);
            const double c = dx[j] * ey[j] - dy[j] * ex[j];
            const double sb = dx[j + 1] * ex[j] + dy[j + 1] * ey[j];
            const double sa = dx[j] * ex[j] + dy[j] * ey[j];
            const double g = 0.5 * (sb * lr[j + 1] - sa * lr[j]) + c * ang;
            // (y-x).n = c/|e| is constant on the segment.
            acc += c * (0.5 * g * il2[j] - 0.75);
        }
    }
    return acc;
}

void BoundaryTable::velocities(std::span<const Vec2> points, std::span<Vec2> out) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = velocity(points[i]);
}

void BoundaryTable::log_potentials(std::span<const Vec2> points, std::span<double> out) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = log_potential(points[i]);
}

}  // namespace vortex

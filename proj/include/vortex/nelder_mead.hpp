#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace vortex {

template <std::size_t D>
struct SimplexResult {
    std::array<double, D> x{};
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// Nelder-Mead with standard coefficients. Stops when every vertex lies within `step` of the
// best one (max-norm) or after max_evaluations.
template <std::size_t D, class F>
SimplexResult<D> nelder_mead(F&& f, std::array<double, D> start, double initial_step, double step,
                             std::size_t max_evaluations = 4000) {
    using Point = std::array<double, D>;
    std::array<Point, D + 1> v;
    std::array<double, D + 1> fv;
    SimplexResult<D> out;
    auto eval = [&](const Point& p) {
        ++out.evaluations;
        return f(p);
    };
    v[0] = start;
    for (std::size_t i = 0; i < D; ++i) {
        v[i + 1] = start;
        v[i + 1][i] += initial_step;
    }
    for (std::size_t i = 0; i <= D; ++i) fv[i] = eval(v[i]);

    auto combine = [](const Point& a, const Point& b, double t) {
        Point r;
        for (std::size_t k = 0; k < D; ++k) r[k] = a[k] + t * (b[k] - a[k]);
        return r;
    };

    while (true) {
        std::array<std::size_t, D + 1> idx;
        for (std::size_t i = 0; i <= D; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::array<Point, D + 1> sv;
        std::array<double, D + 1> sf;
        for (std::size_t i = 0; i <= D; ++i) {
            sv[i] = v[idx[i]];
            sf[i] = fv[idx[i]];
        }
        v = sv;
        fv = sf;

        double size = 0.0;
        for (std::size_t i = 1; i <= D; ++i)
            for (std::size_t k = 0; k < D; ++k) size = std::max(size, std::abs(v[i][k] - v[0][k]));
        if (size <= step) {
            out.converged = true;
            break;
        }
        if (out.evaluations >= max_evaluations) break;

        Point centroid{};
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t k = 0; k < D; ++k) centroid[k] += v[i][k] / D;

        const Point xr = combine(centroid, v[D], -1.0);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const Point xe = combine(centroid, v[D], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                v[D] = xe;
                fv[D] = fe;
            } else {
                v[D] = xr;
                fv[D] = fr;
            }
        } else if (fr < fv[D - 1]) {
            v[D] = xr;
            fv[D] = fr;
        } else {
            const bool outside = fr < fv[D];
            const Point xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, v[D], 0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[D])) {
                v[D] = xc;
                fv[D] = fc;
            } else {
                for (std::size_t i = 1; i <= D; ++i) {
                    v[i] = combine(v[0], v[i], 0.5);
                    fv[i] = eval(v[i]);
                }
            }
        }
    }
    out.x = v[0];
    out.value = fv[0];
    return out;
}

}  // namespace vortex

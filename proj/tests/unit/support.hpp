#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vortex/geometry.hpp"

namespace testing {

using vortex::Contour;
using vortex::Patch;
using vortex::Vec2;

inline Contour regular_polygon(std::size_t n, double r = 1.0, Vec2 center = {}) {
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(center + vortex::polar(r, 2.0 * std::numbers::pi * i / n));
    return Contour(v);
}

inline Patch disk_patch(std::size_t n, double r = 1.0, Vec2 center = {}) {
    return Patch(regular_polygon(n, r, center));
}

inline Contour unit_square(Vec2 lower_left = {}) {
    return Contour({lower_left, lower_left + Vec2{1, 0}, lower_left + Vec2{1, 1}, lower_left + Vec2{0, 1}});
}

// Star polygon r(theta) with random low-order Fourier content; always simple.
inline Contour random_star(std::mt19937_64& rng, std::size_t n = 200) {
    std::uniform_real_distribution<double> amp(-0.15, 0.15), phase(0.0, 2.0 * std::numbers::pi);
    double a[4], p[4];
    for (int k = 0; k < 4; ++k) {
        a[k] = amp(rng) / (k + 1);
        p[k] = phase(rng);
    }
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        double r = 1.0;
        for (int k = 0; k < 4; ++k) r += a[k] * std::cos((k + 2) * t + p[k]);
        v.push_back(vortex::polar(r, t));
    }
    return Contour(v);
}

// Winding number by summing wrapped angles; independent of the crossing test in contains().
inline int winding_number(const Contour& c, Vec2 x) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec2 a = c[i] - x;
        const Vec2 b = c.cyclic(i + 1) - x;
        total += std::atan2(vortex::cross(a, b), vortex::dot(a, b));
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace testing

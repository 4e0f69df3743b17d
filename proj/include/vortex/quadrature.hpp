#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vortex/geometry.hpp"

namespace vortex {

// Gauss-Legendre nodes and weights mapped to [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Triangle parametrized as x(s,t) = apex + s (b - apex + t (c - b)), s,t in [0,1].
struct Triangle {
    Vec2 apex;
    Vec2 b;
    Vec2 c;
};

std::vector<Triangle> fan_triangulation(const Contour& contour, const Vec2& center);
// Ear clipping; the contour must be simple and counterclockwise.
std::vector<Triangle> ear_clip(const Contour& contour);
// Fan from the centroid (or origin) when the contour is star-shaped about it, else ear clipping.
std::vector<Triangle> triangulate(const Contour& contour);

// Fills out[i] with f(points[i]).
using BatchIntegrand = std::function<void(std::span<const Vec2>, std::span<double>)>;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t cells = 0;
    bool converged = false;
};

// Globally adaptive tensor Gauss rule on the triangles; the worst cells are bisected until the
// summed |fine - coarse| estimate drops below max(abs_tol, rel_tol |value|) or max_cells is reached.
QuadratureResult integrate_triangles(const std::vector<Triangle>& triangles, const BatchIntegrand& f,
                                     double abs_tol, double rel_tol = 0.0, std::size_t max_cells = 2'000'000);

}  // namespace vortex

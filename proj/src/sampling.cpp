#include "vortex/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace vortex {

PatchSampler::PatchSampler(const Patch& p) {
    if (p.simply_connected()) {
        const Contour& c = p.boundary();
        if (is_star_shaped(c, Vec2{})) {
            fan_ = true;
        } else {
            const Moments m = moments(c);
            center_ = m.first / m.mass;
            fan_ = is_star_shaped(c, center_);
        }
        tris_ = fan_ ? fan_triangulation(c, center_) : ear_clip(c);
    } else {
        for (const auto& c : p.components()) {
            auto t = ear_clip(c);
            tris_.insert(tris_.end(), t.begin(), t.end());
        }
    }
    cdf_.reserve(tris_.size());
    for (const auto& t : tris_) {
        total_ += 0.5 * std::abs(cross(t.b - t.apex, t.c - t.apex));
        cdf_.push_back(total_);
    }
}

Vec2 PatchSampler::operator()(double u1, double u2) const {
    const double target = u1 * total_;
    std::size_t i = std::upper_bound(cdf_.begin(), cdf_.end(), target) - cdf_.begin();
    if (i >= tris_.size()) i = tris_.size() - 1;
    const double lo = i == 0 ? 0.0 : cdf_[i - 1];
    const double f = std::clamp((target - lo) / (cdf_[i] - lo), 0.0, 1.0);
    const Triangle& t = tris_[i];
    const Vec2 edge_point = t.b + f * (t.c - t.b);
    return t.apex + std::sqrt(u2) * (edge_point - t.apex);
}

}  // namespace vortex

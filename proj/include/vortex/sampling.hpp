#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vortex/geometry.hpp"
#include "vortex/quadrature.hpp"

namespace vortex {

// One generator per block of samples, so results do not depend on how blocks are scheduled.
inline std::mt19937_64 block_generator(std::uint64_t seed, std::uint64_t block) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (block + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return std::mt19937_64(z ^ (z >> 31));
}

inline double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Measure-preserving map from the unit square onto a patch. Triangles are picked by area from
// the first coordinate; inside a triangle the first coordinate also fixes a point on the far
// edge and the second one the radial position from the apex.
class PatchSampler {
public:
    explicit PatchSampler(const Patch& p);

    Vec2 operator()(double u1, double u2) const;
    double area() const { return total_; }
    // True when the patch is a single component fanned from center().
    bool fan() const { return fan_; }
    Vec2 center() const { return center_; }

private:
    std::vector<Triangle> tris_;
    std::vector<double> cdf_;
    double total_ = 0.0;
    bool fan_ = false;
    Vec2 center_;
};

}  // namespace vortex

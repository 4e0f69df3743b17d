#pragma once

#include <span>
#include <vector>

#include "vortex/geometry.hpp"

namespace vortex {

// Flattened boundary nodes of a patch prepared for exact per-segment integrals of the
// logarithmic kernel. Each component stores its first node again at the end.
//
// For a straight segment a->b with e = b - a and evaluation point x, the closed form
//   G = 1/2 [(b-x).e ln|b-x|^2 - (a-x).e ln|a-x|^2] + ((a-x) x e) * angle(a-x, b-x)
// gives  int_seg ln|x-y| ds = G/|e| - |e|.  Logarithms and polar angles are per node, so
// each evaluation costs one log and one atan2 per boundary node.
class BoundaryTable {
public:
    explicit BoundaryTable(const Patch& p);
    explicit BoundaryTable(const Contour& c);

    // u(x) = -(1/2pi) oint ln|x-y| dy, the Biot-Savart velocity of the unit patch.
    Vec2 velocity(const Vec2& x) const;
    // psi(x) = int_Omega ln|x-y| dy via the divergence identity
    // div_y[(y-x)(ln|y-x|/2 - 1/4)] = ln|y-x|.
    double log_potential(const Vec2& x) const;

    // Batched versions, parallel over evaluation points.
    void velocities(std::span<const Vec2> points, std::span<Vec2> out) const;
    void log_potentials(std::span<const Vec2> points, std::span<double> out) const;

    std::size_t node_count() const { return xs_.size(); }

private:
    void build(const std::vector<Contour>& components);

    std::vector<double> xs_, ys_;
    std::vector<double> ex_, ey_, inv_len2_;  // per node; the closing node's entries are unused
    std::vector<std::size_t> offsets_;       // component k owns nodes [offsets_[k], offsets_[k+1])
};

inline Vec2 induced_velocity(const Patch& p, const Vec2& x) { return BoundaryTable(p).velocity(x); }

}  // namespace vortex

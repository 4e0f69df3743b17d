#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortex/vec2.hpp"

namespace vortex {

// Distance below which a point is reported as lying on a boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

enum class Orientation { counterclockwise, clockwise };

// Closed polyline; the last vertex connects back to the first.
class Contour {
public:
    Contour() = default;

    // A repeated closing vertex is dropped. Throws InvalidInput for fewer than three
    // vertices or consecutive duplicates, and for self-intersection when check_simple is set.
    explicit Contour(std::vector<Vec2> vertices, bool check_simple = false);

    const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    const Vec2& operator[](std::size_t i) const { return vertices_[i]; }
    // Vertex i modulo size().
    const Vec2& cyclic(std::size_t i) const { return vertices_[i % vertices_.size()]; }

    Orientation orientation() const;

    Contour reversed() const;
    Contour translated(const Vec2& shift) const;
    // Rotation about the origin.
    Contour rotated(double angle) const;
    // Uniform scaling about the origin.
    Contour scaled(double factor) const;

private:
    std::vector<Vec2> vertices_;
};

// Unit-vorticity region. The usual case is a single counterclockwise boundary; disjoint
// extra components are allowed for constructions that need them (see sharpness_family).
class Patch {
public:
    Patch() = default;
    explicit Patch(Contour boundary);
    static Patch from_components(std::vector<Contour> components);

    const Contour& boundary() const { return components_.front(); }
    const std::vector<Contour>& components() const noexcept { return components_; }
    bool simply_connected() const noexcept { return components_.size() == 1; }
    std::size_t vertex_count() const;

    Patch translated(const Vec2& shift) const;
    Patch rotated(double angle) const;
    Patch scaled(double factor) const;

private:
    std::vector<Contour> components_;
};

struct Disk {
    Vec2 center;
    double radius = 1.0;
};

struct BoundingBox {
    Vec2 min;
    Vec2 max;
};

struct Moments {
    double mass = 0.0;    // integral of omega
    Vec2 first;           // integral of x omega
    double second = 0.0;  // integral of |x|^2 omega
};

// Integrals of xx, xy, yy over the patch.
struct InertiaTensor {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

enum class Membership { outside, inside, boundary };

double signed_area(const Contour& c);
double area(const Patch& p);
double perimeter(const Contour& c);
double perimeter(const Patch& p);

Moments moments(const Contour& c);
Moments moments(const Patch& p);
InertiaTensor inertia_tensor(const Patch& p);
BoundingBox bounding_box(const Contour& c);
BoundingBox bounding_box(const Patch& p);

Membership contains(const Patch& p, const Vec2& x, double tol = kBoundaryTolerance);

// Shortest distance from x to the polyline.
double distance_to_boundary(const Contour& c, const Vec2& x);
double min_edge_length(const Contour& c);
double max_edge_length(const Contour& c);

// Area of the patch inside the disk; exact for polygon versus circle (arc-aware clipping).
double disk_intersection_area(const Patch& p, const Disk& d);
// |Omega triangle B(a,r)| = |Omega| + pi r^2 - 2 |Omega cap B(a,r)|.
double disk_symmetric_difference(const Patch& p, const Disk& d);
// Exact symmetric-difference area of two polygonal patches (vertical slab decomposition).
double symmetric_difference_area(const Patch& a, const Patch& b);
// |Omega triangle R_{2pi/m} Omega|; zero for m-fold symmetric patches.
double check_mfold_symmetry(const Patch& p, int m);

// First pair of non-adjacent edges that intersect, if any. Edge i runs from vertex i to i+1.
std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(const Contour& c);
inline bool is_simple(const Contour& c) { return !find_self_intersection(c).has_value(); }
bool is_star_shaped(const Contour& c, const Vec2& center);

// Symmetric Hausdorff distance between two polylines, measured vertex-to-polyline.
double hausdorff_distance(const Contour& a, const Contour& b);

// Plain-text exchange format: header "x,y", one vertex per row, implicit closure.
Contour read_contour_csv(std::istream& in);
Contour read_contour_csv(const std::string& path);
void write_contour_csv(std::ostream& out, const Contour& c);
void write_contour_csv(const std::string& path, const Contour& c);

}  // namespace vortex

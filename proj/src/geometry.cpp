#include "vortex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = norm2(ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

// Signed area of the triangle (0, p, q) intersected with the disk of radius r at the origin.
double triangle_disk_area(const Vec2& p, const Vec2& q, double r) {
    const double r2 = r * r;
    const Vec2 d = q - p;
    const double a = norm2(d);
    if (a == 0.0) return 0.0;
    const double b = 2.0 * dot(p, d);
    const double c = norm2(p) - r2;
    const double disc = b * b - 4.0 * a * c;

    // Crossing points count as lying on the circle; a piece is a straight triangle only when both
    // of its ends are inside or on the circle (a tangent edge stays a sector).
    Vec2 pts[4];
    bool in[4];
    int n = 0;
    pts[n] = p;
    in[n++] = norm2(p) <= r2;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double qq = -0.5 * (b + std::copysign(s, b));
        double t1 = qq / a;
        double t2 = qq != 0.0 ? c / qq : t1;
        if (t1 > t2) std::swap(t1, t2);
        if (t1 > 0.0 && t1 < 1.0) {
            pts[n] = p + t1 * d;
            in[n++] = true;
        }
        if (t2 > 0.0 && t2 < 1.0) {
            pts[n] = p + t2 * d;
            in[n++] = true;
        }
    }
    pts[n] = q;
    in[n++] = norm2(q) <= r2;

    double total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const Vec2& u = pts[i];
        const Vec2& v = pts[i + 1];
        if (in[i] && in[i + 1]) {
            total += 0.5 * cross(u, v);
        } else {
            total += 0.5 * r2 * std::atan2(cross(u, v), dot(u, v));
        }
    }
    return total;
}

}  // namespace

Contour::Contour(std::vector<Vec2> vertices, bool check_simple) : vertices_(std::move(vertices)) {
    if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
    if (vertices_.size() < 3) throw InvalidInput("contour needs at least 3 distinct vertices");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vec2& a = vertices_[i];
        if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw InvalidInput("contour vertex is not finite");
        if (a == cyclic(i + 1)) {
            throw InvalidInput("contour has consecutive duplicate vertices at index " + std::to_string(i));
        }
    }
    if (check_simple) {
        if (auto hit = find_self_intersection(*this)) {
            throw InvalidInput("contour self-intersects at edges " + std::to_string(hit->first) + " and " +
                               std::to_string(hit->second));
        }
    }
}

Orientation Contour::orientation() const {
    return signed_area(*this) >= 0.0 ? Orientation::counterclockwise : Orientation::clockwise;
}

Contour Contour::reversed() const {
    std::vector<Vec2> v(vertices_.rbegin(), vertices_.rend());
    return Contour(std::move(v));
}

Contour Contour::translated(const Vec2& shift) const {
    std::vector<Vec2> v = vertices_;
    for (auto& p : v) p += shift;
    return Contour(std::move(v));
}

Contour Contour::rotated(double angle) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    std::vector<Vec2> v = vertices_;
    for (auto& p : v) p = {c * p.x - s * p.y, s * p.x + c * p.y};
    return Contour(std::move(v));
}

Contour Contour::scaled(double factor) const {
    std::vector<Vec2> v = vertices_;
    for (auto& p : v) p *= factor;
    return Contour(std::move(v));
}

Patch::Patch(Contour boundary) {
    if (boundary.size() < 3) throw InvalidInput("patch boundary is empty");
    if (signed_area(boundary) <= 0.0) {
        throw InvalidInput("patch boundary must be counterclockwise with positive area");
    }
    components_.push_back(std::move(boundary));
}

Patch Patch::from_components(std::vector<Contour> components) {
    if (components.empty()) throw InvalidInput("patch needs at least one component");
    Patch p;
    for (auto& c : components) {
        if (c.size() < 3 || signed_area(c) <= 0.0) {
            throw InvalidInput("every patch component must be counterclockwise with positive area");
        }
        p.components_.push_back(std::move(c));
    }
    return p;
}

std::size_t Patch::vertex_count() const {
    std::size_t n = 0;
    for (const auto& c : components_) n += c.size();
    return n;
}

Patch Patch::translated(const Vec2& shift) const {
    Patch p;
    for (const auto& c : components_) p.components_.push_back(c.translated(shift));
    return p;
}

Patch Patch::rotated(double angle) const {
    Patch p;
    for (const auto& c : components_) p.components_.push_back(c.rotated(angle));
    return p;
}

Patch Patch::scaled(double factor) const {
    if (!(factor > 0.0)) throw InvalidInput("scale factor must be positive");
    Patch p;
    for (const auto& c : components_) p.components_.push_back(c.scaled(factor));
    return p;
}

double signed_area(const Contour& c) {
    if (c.size() < 3) throw InvalidInput("degenerate contour");
    const auto& v = c.vertices();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], c.cyclic(i + 1));
    return 0.5 * s;
}

double area(const Patch& p) {
    double a = 0.0;
    for (const auto& c : p.components()) a += signed_area(c);
    return a;
}

double perimeter(const Contour& c) {
    if (c.size() < 3) throw InvalidInput("degenerate contour");
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += norm(c.cyclic(i + 1) - c[i]);
    return s;
}

double perimeter(const Patch& p) {
    double s = 0.0;
    for (const auto& c : p.components()) s += perimeter(c);
    return s;
}

Moments moments(const Contour& c) {
    Moments m;
    double mass = 0.0, fx = 0.0, fy = 0.0, sec = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec2& a = c[i];
        const Vec2& b = c.cyclic(i + 1);
        const double w = cross(a, b);
        mass += w;
        fx += w * (a.x + b.x);
        fy += w * (a.y + b.y);
        sec += w * (a.x * a.x + a.x * b.x + b.x * b.x + a.y * a.y + a.y * b.y + b.y * b.y);
    }
    m.mass = mass / 2.0;
    m.first = {fx / 6.0, fy / 6.0};
    m.second = sec / 12.0;
    return m;
}

Moments moments(const Patch& p) {
    Moments total;
    for (const auto& c : p.components()) {
        const Moments m = moments(c);
        total.mass += m.mass;
        total.first += m.first;
        total.second += m.second;
    }
    return total;
}

InertiaTensor inertia_tensor(const Patch& p) {
    InertiaTensor t;
    for (const auto& c : p.components()) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Vec2& a = c[i];
            const Vec2& b = c.cyclic(i + 1);
            const double w = cross(a, b);
            t.xx += w * (a.x * a.x + a.x * b.x + b.x * b.x);
            t.yy += w * (a.y * a.y + a.y * b.y + b.y * b.y);
            t.xy += w * (2.0 * a.x * a.y + a.x * b.y + b.x * a.y + 2.0 * b.x * b.y);
        }
    }
    t.xx /= 12.0;
    t.yy /= 12.0;
    t.xy /= 24.0;
    return t;
}

BoundingBox bounding_box(const Contour& c) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox bb{{inf, inf}, {-inf, -inf}};
    for (const auto& v : c.vertices()) {
        bb.min.x = std::min(bb.min.x, v.x);
        bb.min.y = std::min(bb.min.y, v.y);
        bb.max.x = std::max(bb.max.x, v.x);
        bb.max.y = std::max(bb.max.y, v.y);
    }
    return bb;
}

BoundingBox bounding_box(const Patch& p) {
    BoundingBox bb = bounding_box(p.components().front());
    for (const auto& c : p.components()) {
        const BoundingBox b = bounding_box(c);
        bb.min.x = std::min(bb.min.x, b.min.x);
        bb.min.y = std::min(bb.min.y, b.min.y);
        bb.max.x = std::max(bb.max.x, b.max.x);
        bb.max.y = std::max(bb.max.y, b.max.y);
    }
    return bb;
}

double distance_to_boundary(const Contour& c, const Vec2& x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i) {
        best = std::min(best, point_segment_distance(x, c[i], c.cyclic(i + 1)));
    }
    return best;
}

double min_edge_length(const Contour& c) {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i) h = std::min(h, norm(c.cyclic(i + 1) - c[i]));
    return h;
}

double max_edge_length(const Contour& c) {
    double h = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) h = std::max(h, norm(c.cyclic(i + 1) - c[i]));
    return h;
}

Membership contains(const Patch& p, const Vec2& x, double tol) {
    bool inside = false;
    for (const auto& c : p.components()) {
        const auto& v = c.vertices();
        const std::size_t n = v.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2& a = v[j];
            const Vec2& b = v[i];
            if (point_segment_distance(x, a, b) <= tol) return Membership::boundary;
            if ((b.y > x.y) != (a.y > x.y)) {
                const double xint = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (x.x < xint) inside = !inside;
            }
        }
    }
    return inside ? Membership::inside : Membership::outside;
}

double disk_intersection_area(const Patch& p, const Disk& d) {
    if (!(d.radius > 0.0)) throw InvalidInput("disk radius must be positive");
    double total = 0.0;
    for (const auto& c : p.components()) {
        const BoundingBox bb = bounding_box(c);
        if (bb.min.x > d.center.x + d.radius || bb.max.x < d.center.x - d.radius ||
            bb.min.y > d.center.y + d.radius || bb.max.y < d.center.y - d.radius) {
            continue;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            s += triangle_disk_area(c[i] - d.center, c.cyclic(i + 1) - d.center, d.radius);
        }
        total += s;
    }
    return total;
}

double disk_symmetric_difference(const Patch& p, const Disk& d) {
    const double inter = disk_intersection_area(p, d);
    const double value = area(p) + std::numbers::pi * d.radius * d.radius - 2.0 * inter;
    return std::max(value, 0.0);
}

double check_mfold_symmetry(const Patch& p, int m) {
    if (m < 2) throw InvalidInput("symmetry order m must be at least 2");
    return symmetric_difference_area(p, p.rotated(2.0 * std::numbers::pi / m));
}

std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(const Contour& c) {
    const std::size_t n = c.size();
    struct Edge {
        double xmin, xmax;
        std::size_t index;
    };
    std::vector<Edge> edges(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = c[i];
        const Vec2& b = c.cyclic(i + 1);
        edges[i] = {std::min(a.x, b.x), std::max(a.x, b.x), i};
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.xmin < b.xmin; });
    for (std::size_t k = 0; k < n; ++k) {
        const Edge& e = edges[k];
        const Vec2& a = c[e.index];
        const Vec2& b = c.cyclic(e.index + 1);
        const double ymin = std::min(a.y, b.y);
        const double ymax = std::max(a.y, b.y);
        for (std::size_t l = k + 1; l < n && edges[l].xmin <= e.xmax; ++l) {
            const std::size_t j = edges[l].index;
            const std::size_t i = e.index;
            if (j == (i + 1) % n || i == (j + 1) % n) continue;
            const Vec2& p = c[j];
            const Vec2& q = c.cyclic(j + 1);
            if (std::max(p.y, q.y) < ymin || std::min(p.y, q.y) > ymax) continue;
            if (segments_intersect(a, b, p, q)) return std::make_pair(std::min(i, j), std::max(i, j));
        }
    }
    return std::nullopt;
}

bool is_star_shaped(const Contour& c, const Vec2& center) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec2 a = c[i] - center;
        const Vec2 b = c.cyclic(i + 1) - center;
        const double cr = cross(a, b);
        if (!(cr > 0.0)) return false;
        total += std::atan2(cr, dot(a, b));
    }
    return std::abs(total - 2.0 * std::numbers::pi) < 1e-6;
}

double hausdorff_distance(const Contour& a, const Contour& b) {
    auto directed = [](const Contour& from, const Contour& to) {
        double worst = 0.0;
        for (const auto& v : from.vertices()) worst = std::max(worst, distance_to_boundary(to, v));
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

Contour read_contour_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("contour CSV is empty");
    auto trim = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
        return s;
    };
    if (trim(line) != "x,y") throw InvalidInput("contour CSV must start with header x,y");
    std::vector<Vec2> pts;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidInput("malformed contour CSV row " + std::to_string(row));
        try {
            std::size_t used = 0;
            const double x = std::stod(line.substr(0, comma), &used);
            const std::string ys = line.substr(comma + 1);
            const double y = std::stod(ys, &used);
            if (used != ys.size()) throw std::invalid_argument("trailing");
            pts.push_back({x, y});
        } catch (const std::exception&) {
            throw InvalidInput("malformed contour CSV row " + std::to_string(row));
        }
    }
    return Contour(std::move(pts));
}

Contour read_contour_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open contour file " + path);
    return read_contour_csv(in);
}

void write_contour_csv(std::ostream& out, const Contour& c) {
    out << "x,y\n";
    char buf[64];
    for (const auto& v : c.vertices()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.x, v.y);
        out << buf;
    }
}

void write_contour_csv(const std::string& path, const Contour& c) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write contour file " + path);
    write_contour_csv(out, c);
}

}  // namespace vortex

#include <algorithm>
#include <cmath>
#include <vector>

#include "vortex/geometry.hpp"

namespace vortex {

namespace {

struct LabeledEdge {
    Vec2 a;
    Vec2 b;
    int label;  // 0 for the first patch, 1 for the second
    double xmin() const { return std::min(a.x, b.x); }
    double xmax() const { return std::max(a.x, b.x); }
};

void collect_edges(const Patch& p, int label, std::vector<LabeledEdge>& out) {
    for (const auto& c : p.components()) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Vec2& a = c[i];
            const Vec2& b = c.cyclic(i + 1);
            if (a.x != b.x) out.push_back({a, b, label});
        }
    }
}

// x-coordinate of a proper crossing between two non-parallel segments.
bool crossing_x(const LabeledEdge& e, const LabeledEdge& f, double& x) {
    const Vec2 r = e.b - e.a;
    const Vec2 s = f.b - f.a;
    const double denom = cross(r, s);
    if (denom == 0.0) return false;
    const Vec2 qp = f.a - e.a;
    const double t = cross(qp, s) / denom;
    const double u = cross(qp, r) / denom;
    if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return false;
    x = e.a.x + t * r.x;
    return true;
}

}  // namespace

// Every edge is linear inside a slab bounded by consecutive event abscissae (vertices and
// pairwise crossings), so the area between neighbouring edges is width times mid-slab gap.
double symmetric_difference_area(const Patch& pa, const Patch& pb) {
    std::vector<LabeledEdge> edges;
    collect_edges(pa, 0, edges);
    collect_edges(pb, 1, edges);

    std::vector<double> events;
    events.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        events.push_back(e.a.x);
        events.push_back(e.b.x);
    }

    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return edges[i].xmin() < edges[j].xmin(); });

    for (std::size_t k = 0; k < order.size(); ++k) {
        const LabeledEdge& e = edges[order[k]];
        const double exmax = e.xmax();
        const double eymin = std::min(e.a.y, e.b.y);
        const double eymax = std::max(e.a.y, e.b.y);
        for (std::size_t l = k + 1; l < order.size(); ++l) {
            const LabeledEdge& f = edges[order[l]];
            if (f.xmin() > exmax) break;
            if (f.label == e.label) continue;
            if (std::max(f.a.y, f.b.y) < eymin || std::min(f.a.y, f.b.y) > eymax) continue;
            double x;
            if (crossing_x(e, f, x)) events.push_back(x);
        }
    }

    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    struct Crossing {
        double y;
        int label;
        int dir;
    };
    std::vector<Crossing> column;
    std::vector<std::size_t> active;
    std::size_t next = 0;
    double total = 0.0;

    for (std::size_t s = 0; s + 1 < events.size(); ++s) {
        const double x0 = events[s];
        const double x1 = events[s + 1];
        const double width = x1 - x0;
        if (width <= 0.0) continue;
        const double xm = 0.5 * (x0 + x1);

        while (next < order.size() && edges[order[next]].xmin() <= x0) active.push_back(order[next++]);
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](std::size_t i) { return edges[i].xmax() <= x0; }),
                     active.end());

        column.clear();
        for (std::size_t i : active) {
            const LabeledEdge& e = edges[i];
            if (e.xmax() < x1) continue;
            const double t = (xm - e.a.x) / (e.b.x - e.a.x);
            const double y = e.a.y + t * (e.b.y - e.a.y);
            column.push_back({y, e.label, e.b.x > e.a.x ? 1 : -1});
        }
        std::sort(column.begin(), column.end(), [](const Crossing& a, const Crossing& b) { return a.y < b.y; });

        int wa = 0, wb = 0;
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            (column[i].label == 0 ? wa : wb) += column[i].dir;
            if ((wa != 0) != (wb != 0)) total += width * (column[i + 1].y - column[i].y);
        }
    }
    return total;
}

}  // namespace vortex

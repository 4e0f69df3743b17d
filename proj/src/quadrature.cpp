#include "vortex/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "vortex/errors.hpp"

namespace vortex {

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - z);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

std::vector<Triangle> fan_triangulation(const Contour& contour, const Vec2& center) {
    std::vector<Triangle> tris;
    tris.reserve(contour.size());
    for (std::size_t i = 0; i < contour.size(); ++i) tris.push_back({center, contour[i], contour.cyclic(i + 1)});
    return tris;
}

std::vector<Triangle> ear_clip(const Contour& contour) {
    const std::size_t n = contour.size();
    const auto& v = contour.vertices();
    std::vector<std::size_t> prev(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
        prev[i] = (i + n - 1) % n;
        next[i] = (i + 1) % n;
    }
    auto convex = [&](std::size_t i) { return cross(v[i] - v[prev[i]], v[next[i]] - v[i]) > 0.0; };
    auto inside = [](const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
        return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
    };
    std::vector<char> reflex(n);
    for (std::size_t i = 0; i < n; ++i) reflex[i] = !convex(i);

    auto is_ear = [&](std::size_t i) {
        if (reflex[i]) return false;
        const Vec2& a = v[prev[i]];
        const Vec2& b = v[i];
        const Vec2& c = v[next[i]];
        const double xmin = std::min({a.x, b.x, c.x}), xmax = std::max({a.x, b.x, c.x});
        const double ymin = std::min({a.y, b.y, c.y}), ymax = std::max({a.y, b.y, c.y});
        for (std::size_t j = next[next[i]]; j != prev[i]; j = next[j]) {
            if (!reflex[j]) continue;
            const Vec2& p = v[j];
            if (p.x < xmin || p.x > xmax || p.y < ymin || p.y > ymax) continue;
            if (p == a || p == b || p == c) continue;
            if (inside(p, a, b, c)) return false;
        }
        return true;
    };

    std::vector<Triangle> tris;
    tris.reserve(n - 2);
    std::size_t remaining = n;
    std::size_t i = 0;
    std::size_t misses = 0;
    while (remaining > 3) {
        if (is_ear(i)) {
            tris.push_back({v[i], v[next[i]], v[prev[i]]});
            const std::size_t p = prev[i], q = next[i];
            next[p] = q;
            prev[q] = p;
            --remaining;
            reflex[p] = !convex(p);
            reflex[q] = !convex(q);
            i = q;
            misses = 0;
        } else {
            i = next[i];
            if (++misses > remaining) throw InvalidInput("ear clipping failed; contour is not simple");
        }
    }
    tris.push_back({v[i], v[next[i]], v[prev[i]]});
    return tris;
}

std::vector<Triangle> triangulate(const Contour& contour) {
    const Moments m = moments(contour);
    const Vec2 centroid = m.first / m.mass;
    if (is_star_shaped(contour, centroid)) return fan_triangulation(contour, centroid);
    if (is_star_shaped(contour, Vec2{})) return fan_triangulation(contour, Vec2{});
    return ear_clip(contour);
}

namespace {

constexpr int kRuleS = 4;
constexpr int kRuleT = 3;

struct Cell {
    std::size_t tri;
    double s0, s1, t0, t1;
};

struct Scored {
    Cell cell;
    double coarse;  // rule on the whole cell
    double fine;    // rule on the two halves
    Cell halves[2];
    double half_values[2];
    double error() const { return std::abs(fine - coarse); }
};

struct ScoredLess {
    bool operator()(const Scored& a, const Scored& b) const { return a.error() < b.error(); }
};

void split(const std::vector<Triangle>& tris, const Cell& c, Cell out[2]) {
    const Triangle& t = tris[c.tri];
    const Vec2 edge = t.c - t.b;
    const Vec2 mid = t.b + 0.5 * (c.t0 + c.t1) * edge - t.apex;
    const double s_len = norm(mid) * (c.s1 - c.s0);
    const double t_len = norm(edge) * c.s1 * (c.t1 - c.t0);
    if (s_len >= t_len) {
        const double sm = 0.5 * (c.s0 + c.s1);
        out[0] = {c.tri, c.s0, sm, c.t0, c.t1};
        out[1] = {c.tri, sm, c.s1, c.t0, c.t1};
    } else {
        const double tm = 0.5 * (c.t0 + c.t1);
        out[0] = {c.tri, c.s0, c.s1, c.t0, tm};
        out[1] = {c.tri, c.s0, c.s1, tm, c.t1};
    }
}

// Appends the rule points of a cell; weights include the Jacobian 2|A| s.
void cell_points(const std::vector<Triangle>& tris, const Cell& c, std::vector<Vec2>& pts,
                 std::vector<double>& w) {
    const GaussRule& gs = gauss_legendre(kRuleS);
    const GaussRule& gt = gauss_legendre(kRuleT);
    const Triangle& t = tris[c.tri];
    const double two_area = std::abs(cross(t.b - t.apex, t.c - t.apex));
    const double ds = c.s1 - c.s0;
    const double dt = c.t1 - c.t0;
    for (int i = 0; i < kRuleS; ++i) {
        const double s = c.s0 + ds * gs.nodes[i];
        for (int j = 0; j < kRuleT; ++j) {
            const double tt = c.t0 + dt * gt.nodes[j];
            pts.push_back(t.apex + s * (t.b - t.apex + tt * (t.c - t.b)));
            w.push_back(two_area * s * ds * dt * gs.weights[i] * gt.weights[j]);
        }
    }
}

}  // namespace

QuadratureResult integrate_triangles(const std::vector<Triangle>& tris, const BatchIntegrand& f, double abs_tol,
                                     double rel_tol, std::size_t max_cells) {
    constexpr std::size_t kPer = kRuleS * kRuleT;
    QuadratureResult result;
    std::vector<Vec2> pts;
    std::vector<double> w, vals;

    // Scores a batch of cells: the rule on each cell and on its two halves.
    auto score = [&](const std::vector<Cell>& cells) {
        pts.clear();
        w.clear();
        std::vector<Scored> out(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k) {
            out[k].cell = cells[k];
            split(tris, cells[k], out[k].halves);
            cell_points(tris, cells[k], pts, w);
            cell_points(tris, out[k].halves[0], pts, w);
            cell_points(tris, out[k].halves[1], pts, w);
        }
        vals.assign(pts.size(), 0.0);
        f(pts, vals);
        result.evaluations += pts.size();
        for (std::size_t k = 0; k < cells.size(); ++k) {
            double q[3] = {0.0, 0.0, 0.0};
            for (int part = 0; part < 3; ++part) {
                const std::size_t base = (3 * k + part) * kPer;
                for (std::size_t i = 0; i < kPer; ++i) q[part] += w[base + i] * vals[base + i];
            }
            out[k].coarse = q[0];
            out[k].half_values[0] = q[1];
            out[k].half_values[1] = q[2];
            out[k].fine = q[1] + q[2];
        }
        return out;
    };

    std::vector<Cell> initial;
    initial.reserve(tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i) initial.push_back({i, 0.0, 1.0, 0.0, 1.0});

    std::priority_queue<Scored, std::vector<Scored>, ScoredLess> queue;
    double total = 0.0;
    double err = 0.0;
    for (const auto& s : score(initial)) {
        total += s.fine;
        err += s.error();
        queue.push(s);
    }

    constexpr std::size_t kBatch = 16;
    auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
    while (err > target() && queue.size() < max_cells) {
        std::vector<Cell> refine;
        double removed_value = 0.0;
        double removed_err = 0.0;
        for (std::size_t k = 0; k < kBatch && !queue.empty(); ++k) {
            const Scored worst = queue.top();
            if (k > 0 && worst.error() < 0.25 * target() / static_cast<double>(queue.size())) break;
            queue.pop();
            removed_value += worst.fine;
            removed_err += worst.error();
            refine.push_back(worst.halves[0]);
            refine.push_back(worst.halves[1]);
        }
        total -= removed_value;
        err -= removed_err;
        for (const auto& s : score(refine)) {
            total += s.fine;
            err += s.error();
            queue.push(s);
        }
        if (err < 0.0) err = 0.0;
    }

    // Recompute sums from the final cell set to shed accumulated round-off.
    total = 0.0;
    err = 0.0;
    result.cells = queue.size();
    while (!queue.empty()) {
        total += queue.top().fine;
        err += queue.top().error();
        queue.pop();
    }
    result.value = total;
    result.error = err;
    result.converged = err <= std::max(abs_tol, rel_tol * std::abs(total));
    return result;
}

}  // namespace vortex

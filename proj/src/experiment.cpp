#include "vortex/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "vortex/functionals.hpp"
#include "vortex/geometry.hpp"

#ifndef VORTEX_VERSION
#define VORTEX_VERSION "0.0.0-unknown"
#endif

namespace vortex {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw InvalidInput(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw InvalidInput("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("bad value for '") + key + "': " + e.what());
    }
}

// NaN is stored as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json vec(Vec2 v) { return json::array({number(v.x), number(v.y)}); }

void write_text(const fs::path& path, const std::string& text) {
    // Write then rename, so a crash never leaves a truncated manifest behind.
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

class DirectoryLock {
public:
    explicit DirectoryLock(fs::path path) : path_(std::move(path)) {
        std::FILE* f = std::fopen(path_.c_str(), "wx");
        if (!f) {
            throw RunLocked("run directory is locked by " + path_.string() +
                            " (another process is using it, or a crashed run left the file behind)");
        }
        std::fprintf(f, "locked\n");
        std::fclose(f);
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    fs::path path_;
};

std::string frame_name(const char* stem, std::size_t k, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, k, ext);
    return buf;
}

FunctionalReport report_from_json(const json& j) {
    FunctionalReport r;
    r.mass = number(j.at("mass"));
    r.center = {number(j.at("center")[0]), number(j.at("center")[1])};
    r.angular_momentum = number(j.at("angular_momentum"));
    r.pseudo_energy = number(j.at("pseudo_energy"));
    r.perimeter = number(j.at("perimeter"));
    r.delta = number(j.at("delta"));
    r.epsilon = number(j.at("epsilon"));
    r.epsilon_argmin = {number(j.at("epsilon_argmin")[0]), number(j.at("epsilon_argmin")[1])};
    return r;
}

json frame_entry(std::size_t k, const FlowState& s) {
    return {{"index", k},
            {"t", s.t},
            {"boundary", frame_name("frame", k, "csv")},
            {"markers", frame_name("markers", k, "csv")},
            {"anchor_theta", s.anchor_theta},
            {"vertices", s.boundary.size()},
            {"has_energy", s.has_energy},
            {"has_epsilon", s.has_epsilon},
            {"report", to_json(s.report)}};
}

FlowState load_frame(const fs::path& dir, const json& entry) {
    FlowState s;
    s.t = entry.at("t").get<double>();
    s.boundary = read_contour_csv((dir / entry.at("boundary").get<std::string>()).string());
    s.markers = read_markers_csv(dir / entry.at("markers").get<std::string>());
    s.anchor_theta = entry.at("anchor_theta").get<double>();
    s.has_energy = entry.at("has_energy").get<bool>();
    s.has_epsilon = entry.at("has_epsilon").get<bool>();
    s.report = report_from_json(entry.at("report"));
    return s;
}

// Spread series, bucket series and drift summary, rewritten from all frames.
void post_process(const RunConfig& c, const fs::path& dir, EvolveResult& res) {
    {
        std::ofstream out(dir / "spread.csv");
        out << "t,spread,bound,perimeter\n";
        char buf[160];
        for (const FlowState& f : res.frames) {
            SpreadRow row{f.t, winding_spread_bound(f, c.diagnostics.spread_r0), perimeter(f.boundary)};
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row.t, row.bound.spread, row.bound.bound,
                          row.perimeter);
            out << buf;
            res.spread.push_back(row);
        }
    }
    if (c.diagnostics.winding && !res.frames.front().markers.empty()) {
        std::vector<BucketDecomposition> ds;
        ds.reserve(res.frames.size());
        DriftSummary sum;
        {
            std::ofstream out(dir / "winding.csv");
            out << "t,marker_id,theta,r,bucket\n";
            char buf[160];
            for (const FlowState& f : res.frames) {
                ds.push_back(decompose(f));
                sum.fallbacks += ds.back().fallbacks;
                for (const LiftedMarker& m : f.markers) {
                    const auto it = ds.back().buckets.find(m.id);
                    if (it == ds.back().buckets.end()) continue;
                    std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g,%d\n", f.t, m.id, m.theta, m.r, it->second);
                    out << buf;
                }
            }
        }
        sum.window = c.diagnostics.drift_window > 0.0
                         ? c.diagnostics.drift_window
                         : default_drift_window(c.patch.armed.N, res.frames.front().report.delta);
        if (c.scenario != Scenario::armed && c.diagnostics.drift_window <= 0.0) {
            // The arm length only means something for the armed patch; use R = 1 elsewhere.
            sum.window = default_drift_window(0.0, res.frames.front().report.delta);
        }
        json markers = json::array();
        for (const LiftedMarker& m : res.frames.front().markers) {
            if (!m.exterior) continue;
            const DriftReport d = bucket_drift(ds, res.frames, m.id, sum.window);
            ++sum.markers;
            sum.truncated += d.truncated;
            sum.windows += d.windows;
            sum.exceptions += d.max_window_change >= 3;
            sum.max_window_change = std::max(sum.max_window_change, d.max_window_change);
            sum.max_abs_change = std::max(sum.max_abs_change, d.max_abs_change);
            markers.push_back({{"id", m.id},
                               {"r0", m.r0},
                               {"truncated", d.truncated},
                               {"truncated_at", d.truncated ? json(d.truncated_at) : json(nullptr)},
                               {"max_abs_change", d.max_abs_change},
                               {"max_window_change", d.max_window_change},
                               {"windows", d.windows}});
        }
        const json doc{{"window", sum.window},
                       {"markers", sum.markers},
                       {"truncated", sum.truncated},
                       {"windows", sum.windows},
                       {"exceptions", sum.exceptions},
                       {"max_window_change", sum.max_window_change},
                       {"max_abs_change", sum.max_abs_change},
                       {"fallbacks", sum.fallbacks},
                       {"per_marker", markers}};
        write_text(dir / "drift.json", doc.dump(2) + "\n");
        res.drift = sum;
    }
    if (c.scenario == Scenario::armed || c.diagnostics.monitor_exponent == 4) {
        res.monitor = monitor_trajectory(res.frames, c.diagnostics.monitor_exponent, c.numerics.energy_tol);
        write_text(dir / "monitor.json", to_json(*res.monitor).dump(2) + "\n");
    }
}

}  // namespace

std::string version_string() { return VORTEX_VERSION; }

Scenario parse_scenario(const std::string& name) {
    if (name == "rankine") return Scenario::rankine;
    if (name == "kirchhoff") return Scenario::kirchhoff;
    if (name == "armed") return Scenario::armed;
    if (name == "contour" || name == "custom-contour-file") return Scenario::contour;
    throw InvalidInput("unknown scenario '" + name + "' (rankine, kirchhoff, armed, contour)");
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::rankine: return "rankine";
        case Scenario::kirchhoff: return "kirchhoff";
        case Scenario::armed: return "armed";
        case Scenario::contour: return "contour";
    }
    return "?";
}

RunConfig config_from_json(const json& j) {
    check_keys(j, {"scenario", "name", "patch", "numerics", "markers", "diagnostics", "seed"}, "config");
    RunConfig c;
    if (j.contains("scenario")) c.scenario = parse_scenario(j.at("scenario").get<std::string>());
    read(j, "name", c.name);
    read(j, "seed", c.seed);
    if (j.contains("patch")) {
        const json& p = j.at("patch");
        check_keys(p, {"r", "vertices", "a", "b", "m", "N", "gamma", "profile", "resolution", "contour_file"}, "patch");
        read(p, "r", c.patch.r);
        read(p, "vertices", c.patch.vertices);
        read(p, "a", c.patch.a);
        read(p, "b", c.patch.b);
        read(p, "m", c.patch.armed.m);
        read(p, "N", c.patch.armed.N);
        read(p, "gamma", c.patch.armed.gamma);
        read(p, "resolution", c.patch.armed.resolution);
        read(p, "contour_file", c.patch.contour_file);
        if (p.contains("profile")) c.patch.armed.profile = parse_arm_profile(p.at("profile").get<std::string>());
    }
    if (j.contains("numerics")) {
        const json& n = j.at("numerics");
        check_keys(n,
                   {"T", "dt", "frame_stride", "remesh", "remesh_stride", "hmin", "hmax", "curvature_factor", "sagitta",
                    "cubic", "energy_stride", "epsilon_stride", "energy_tol", "check_simple"},
                   "numerics");
        RunOptions& o = c.numerics;
        read(n, "T", o.T);
        read(n, "dt", o.dt);
        read(n, "frame_stride", o.frame_stride);
        read(n, "remesh", o.remesh);
        read(n, "remesh_stride", o.remesh_stride);
        read(n, "hmin", o.remesh_options.hmin);
        read(n, "hmax", o.remesh_options.hmax);
        read(n, "curvature_factor", o.remesh_options.curvature_factor);
        read(n, "sagitta", o.remesh_options.sagitta);
        read(n, "cubic", o.remesh_options.cubic);
        read(n, "energy_stride", o.energy_stride);
        read(n, "epsilon_stride", o.epsilon_stride);
        read(n, "energy_tol", o.energy_tol);
        read(n, "check_simple", o.check_simple);
    }
    if (j.contains("markers")) {
        const json& m = j.at("markers");
        check_keys(m, {"annuli"}, "markers");
        if (m.contains("annuli")) {
            std::vector<Annulus> annuli;
            for (const json& a : m.at("annuli")) {
                check_keys(a, {"r_inner", "r_outer", "count"}, "markers.annuli[]");
                Annulus an;
                read(a, "r_inner", an.r_inner);
                read(a, "r_outer", an.r_outer);
                read(a, "count", an.count);
                annuli.push_back(an);
            }
            c.annuli = annuli;
        }
    }
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        check_keys(d, {"winding", "spread_r0", "drift_window", "monitor_exponent"}, "diagnostics");
        read(d, "winding", c.diagnostics.winding);
        read(d, "spread_r0", c.diagnostics.spread_r0);
        read(d, "drift_window", c.diagnostics.drift_window);
        read(d, "monitor_exponent", c.diagnostics.monitor_exponent);
    }
    validate(c);
    return c;
}

json to_json(const RunConfig& c) {
    const RunOptions& o = c.numerics;
    json annuli = json::array();
    for (const Annulus& a : marker_annuli(c))
        annuli.push_back({{"r_inner", a.r_inner}, {"r_outer", a.r_outer}, {"count", a.count}});
    return {{"scenario", to_string(c.scenario)},
            {"name", c.name},
            {"seed", c.seed},
            {"patch",
             {{"r", c.patch.r},
              {"vertices", c.patch.vertices},
              {"a", c.patch.a},
              {"b", c.patch.b},
              {"m", c.patch.armed.m},
              {"N", c.patch.armed.N},
              {"gamma", c.patch.armed.gamma},
              {"profile", to_string(c.patch.armed.profile)},
              {"resolution", c.patch.armed.resolution},
              {"contour_file", c.patch.contour_file}}},
            {"numerics",
             {{"T", o.T},
              {"dt", o.dt},
              {"frame_stride", o.frame_stride},
              {"remesh", o.remesh},
              {"remesh_stride", o.remesh_stride},
              {"hmin", o.remesh_options.hmin},
              {"hmax", o.remesh_options.hmax},
              {"curvature_factor", o.remesh_options.curvature_factor},
              {"sagitta", o.remesh_options.sagitta},
              {"cubic", o.remesh_options.cubic},
              {"energy_stride", o.energy_stride},
              {"epsilon_stride", o.epsilon_stride},
              {"energy_tol", o.energy_tol},
              {"check_simple", o.check_simple}}},
            {"markers", {{"annuli", annuli}}},
            {"diagnostics",
             {{"winding", c.diagnostics.winding},
              {"spread_r0", c.diagnostics.spread_r0},
              {"drift_window", c.diagnostics.drift_window},
              {"monitor_exponent", c.diagnostics.monitor_exponent}}}};
}

void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw InvalidInput("invalid config: " + what);
    };
    const PatchConfig& p = c.patch;
    const RunOptions& o = c.numerics;
    need(!c.name.empty() && c.name.find('/') == std::string::npos, "name must be a plain non-empty file name");
    need(p.r > 0.0, "patch.r must be positive");
    need(p.vertices >= 8, "patch.vertices must be at least 8");
    need(p.a > 0.0 && p.b > 0.0, "patch.a and patch.b must be positive");
    need(p.armed.m >= 2, "patch.m must be at least 2");
    need(p.armed.N > 0.0, "patch.N must be positive");
    need(p.armed.gamma > 0.0, "patch.gamma must be positive");
    need(p.armed.resolution > 0.0, "patch.resolution must be positive");
    need(c.scenario != Scenario::contour || !p.contour_file.empty(), "the contour scenario needs patch.contour_file");
    need(o.T > 0.0 && o.dt > 0.0, "numerics.T and numerics.dt must be positive");
    need(o.frame_stride > 0 && o.remesh_stride > 0, "strides must be positive");
    need(o.remesh_options.hmin > 0.0 && o.remesh_options.hmin < o.remesh_options.hmax, "need 0 < hmin < hmax");
    need(o.remesh_options.curvature_factor > 0.0, "numerics.curvature_factor must be positive");
    need(o.remesh_options.sagitta >= 0.0, "numerics.sagitta must be non-negative");
    need(o.energy_tol > 0.0, "numerics.energy_tol must be positive");
    if (c.annuli) {
        for (const Annulus& a : *c.annuli)
            need(a.r_inner > 0.0 && a.r_outer > a.r_inner && a.count > 0, "annuli need 0 < r_inner < r_outer and count > 0");
    }
    need(c.diagnostics.spread_r0 > 0.0, "diagnostics.spread_r0 must be positive");
    need(c.diagnostics.drift_window >= 0.0, "diagnostics.drift_window must be non-negative");
    need(c.diagnostics.monitor_exponent == 2 || c.diagnostics.monitor_exponent == 4,
         "diagnostics.monitor_exponent must be 2 or 4");
}

std::vector<Annulus> marker_annuli(const RunConfig& c) {
    if (c.annuli) return *c.annuli;
    if (c.scenario == Scenario::armed) {
        const double R = 1.0 + c.patch.armed.N;
        return {{1.0, 2.0, 200}, {0.8 * R, R, 200}};
    }
    return {{1.0, 2.0, 200}, {2.0, 3.0, 200}};
}

Patch build_patch(const RunConfig& c) {
    validate(c);
    switch (c.scenario) {
        case Scenario::rankine: return rankine(c.patch.r, c.patch.vertices);
        case Scenario::kirchhoff: return kirchhoff_ellipse(c.patch.a, c.patch.b, c.patch.vertices);
        case Scenario::armed: return armed_patch(c.patch.armed);
        case Scenario::contour: return Patch(read_contour_csv(c.patch.contour_file));
    }
    throw InvalidInput("unknown scenario");
}

json patch_report(const RunConfig& c, const Patch& p) {
    ReportOptions ro;
    ro.energy_tol = c.numerics.energy_tol;
    FunctionalReport fr = functional_report(p, ro);
    const NearestDisk nd = nearest_disk_deviation(p);
    fr.epsilon = nd.epsilon;
    fr.epsilon_argmin = nd.a;
    const EnergyEstimate deficit = energy_deficit_estimate(p, c.numerics.energy_tol);
    json j{{"scenario", to_string(c.scenario)},
           {"vertices", p.vertex_count()},
           {"functionals", to_json(fr)},
           {"equal_mass_radius", equal_mass_radius(p)},
           {"energy_deficit", deficit.value},
           {"energy_deficit_error", deficit.error},
           {"version", version_string()}};
    if (c.scenario == Scenario::armed) {
        const ArmedPatchReport a = armed_patch_report(c.patch.armed, p, false);
        j["armed"] = {{"m", c.patch.armed.m},
                      {"N", c.patch.armed.N},
                      {"gamma", c.patch.armed.gamma},
                      {"mass", a.mass},
                      {"angular_momentum", a.angular_momentum},
                      {"momentum_excess", a.momentum_excess},
                      {"tip_radius", a.tip_radius},
                      {"disk_radius", a.disk_radius},
                      {"arm_width", a.arm_width},
                      {"symmetry_defect", a.symmetry_defect},
                      {"max_feasible_gamma", max_feasible_gamma(c.patch.armed.m, c.patch.armed.N)}};
    }
    return j;
}

json to_json(const FunctionalReport& r) {
    return {{"mass", number(r.mass)},
            {"center", vec(r.center)},
            {"angular_momentum", number(r.angular_momentum)},
            {"pseudo_energy", number(r.pseudo_energy)},
            {"perimeter", number(r.perimeter)},
            {"delta", number(r.delta)},
            {"epsilon", number(r.epsilon)},
            {"epsilon_argmin", vec(r.epsilon_argmin)}};
}

json to_json(const InequalityReport& r) {
    json ratios = json::array();
    for (double x : r.ratios) ratios.push_back(number(x));
    return {{"name", r.name},
            {"corpus_size", r.corpus_size},
            {"violations", r.violations},
            {"min_ratio", number(r.min_ratio)},
            {"max_ratio", number(r.max_ratio)},
            {"witness", r.witness},
            {"status", to_string(r.status)},
            {"tolerance", r.tolerance},
            {"ratios", ratios}};
}

json to_json(const LineFit& f) {
    return {{"slope", number(f.slope)},
            {"intercept", number(f.intercept)},
            {"slope_standard_error", number(f.slope_standard_error)},
            {"r_squared", number(f.r_squared)},
            {"residual_rms", number(f.residual_rms)},
            {"max_residual", number(f.max_residual)},
            {"residuals", f.residuals}};
}

json to_json(const VelocityDiagnostics& d) {
    return {{"eps_tilde", d.eps_tilde},
            {"sup_deviation", d.sup_deviation},
            {"sup_u_theta", d.sup_u_theta},
            {"l2_u_theta", d.l2_u_theta},
            {"l2_u_r_over_r", d.l2_u_r_over_r},
            {"cutoff_inner", d.cutoff_inner},
            {"cutoff_outer", d.cutoff_outer},
            {"near_origin_ratio", d.near_origin_ratio},
            {"far_field_constant", d.far_field_constant}};
}

json to_json(const SpreadBound& s) {
    return {{"spread", s.spread},
            {"bound", s.bound},
            {"r_in", s.r_in},
            {"theta_min", number(s.theta_min)},
            {"theta_max", number(s.theta_max)},
            {"nodes", s.nodes}};
}

json to_json(const MonitorReport& m) {
    json deltas = json::array();
    for (double d : m.deltas) deltas.push_back(number(d));
    return {{"report", to_json(m.report)},
            {"exponent", m.exponent},
            {"deficit0", m.deficit0},
            {"deficit0_error", m.deficit0_error},
            {"times", m.times},
            {"deltas", deltas}};
}

void write_markers_csv(const fs::path& path, const std::vector<LiftedMarker>& markers) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << "id,theta,r,theta0,r0,exterior,weight\n";
    char buf[256];
    for (const LiftedMarker& m : markers) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", m.id, m.theta, m.r, m.theta0, m.r0,
                      m.exterior ? 1 : 0, m.weight);
        out << buf;
    }
}

std::vector<LiftedMarker> read_markers_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<LiftedMarker> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        LiftedMarker m;
        int ext = 1;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf,%d,%lf", &m.id, &m.theta, &m.r, &m.theta0, &m.r0, &ext,
                        &m.weight) != 7) {
            throw InvalidInput("malformed marker row in " + path.string() + ": " + line);
        }
        m.exterior = ext != 0;
        out.push_back(m);
    }
    return out;
}

EvolveResult evolve(const RunConfig& c, const fs::path& dir, bool resume) {
    validate(c);
    fs::create_directories(dir);
    DirectoryLock lock(dir / ".lock");

    EvolveResult res;
    res.directory = dir;
    const fs::path manifest_path = dir / "manifest.json";
    const json config = to_json(c);

    // One dt for the whole run, so a resumed run takes the same steps as an uninterrupted one.
    RunOptions o = c.numerics;
    const std::size_t total_steps = static_cast<std::size_t>(std::ceil(o.T / o.dt - 1e-9));
    const double dt = o.T / static_cast<double>(total_steps);

    json manifest;
    FlowState start;
    if (resume && fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        manifest = json::parse(in);
        if (manifest.at("config") != config) {
            throw InvalidInput("run directory " + dir.string() +
                               " holds a different configuration; pick another --out/--name or pass --fresh");
        }
        for (const json& e : manifest.at("frames")) res.frames.push_back(load_frame(dir, e));
        const std::string status = manifest.at("status").get<std::string>();
        if (status != "running" && !res.frames.empty()) {
            res.complete = status == "complete";
            res.halted = status == "halted";
            res.diagnostic = manifest.value("diagnostic", "");
            post_process(c, dir, res);
            return res;
        }
        if (!res.frames.empty()) {
            start = res.frames.back();
            res.resumed = true;
        }
    }
    if (!res.resumed) {
        // Fresh run: clear the outputs of any earlier attempt.
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("frame_", 0) == 0 || name.rfind("markers_", 0) == 0) fs::remove(entry.path());
        }
        res.frames.clear();
        const Patch p = build_patch(c);
        start = initial_state(p, seed_markers(p, marker_annuli(c), c.seed));
        manifest = json{{"version", version_string()},
                        {"config", config},
                        {"seed", c.seed},
                        {"dt_effective", dt},
                        {"steps", total_steps},
                        {"status", "running"},
                        {"frames", json::array()}};
    }

    const std::size_t done_frames = res.frames.size();
    const std::size_t steps_done = res.resumed ? static_cast<std::size_t>(std::llround(start.t / dt)) : 0;
    o.dt = dt;
    o.T = static_cast<double>(total_steps - steps_done) * dt;
    o.first_frame = res.resumed ? done_frames - 1 : 0;
    o.on_frame = [&](const FlowState& s) {
        const std::size_t k = done_frames + (res.frames.size() - done_frames);
        write_contour_csv((dir / frame_name("frame", k, "csv")).string(), s.boundary);
        write_markers_csv(dir / frame_name("markers", k, "csv"), s.markers);
        manifest["frames"].push_back(frame_entry(k, s));
        write_text(manifest_path, manifest.dump(1) + "\n");
        res.frames.push_back(s);
    };

    if (steps_done < total_steps) {
        RunResult r = run(start, o);
        res.halted = r.halted;
        res.diagnostic = r.diagnostic;
        if (r.offending) write_contour_csv((dir / "offending.csv").string(), r.offending->boundary);
        manifest["remesh"] = {{"inserted", r.remesh_totals.inserted},
                              {"removed", r.remesh_totals.removed},
                              {"area_change", r.remesh_totals.area_change}};
    }
    res.complete = !res.halted;
    manifest["status"] = res.halted ? "halted" : "complete";
    manifest["diagnostic"] = res.diagnostic;
    write_text(manifest_path, manifest.dump(1) + "\n");
    post_process(c, dir, res);
    return res;
}

}  // namespace vortex

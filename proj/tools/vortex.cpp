// Command-line entry point: build, evolve, verify, diagnose, sweep.
// Exit codes: 0 success, 1 runtime error, 2 invalid input, 3 inequality violation.

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vortex/errors.hpp"
#include "vortex/experiment.hpp"
#include "vortex/functionals.hpp"
#include "vortex/geometry.hpp"

namespace fs = std::filesystem;
using namespace vortex;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kInvalid = 2;
constexpr int kViolation = 3;

struct Globals {
    std::string config;
    std::string out = "runs";
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

// Flag overrides layered on top of the config file.
struct Overrides {
    std::optional<std::string> scenario, name, contour;
    std::optional<double> r, a, b, N, gamma, resolution, T, dt;
    std::optional<int> m;
    std::optional<std::size_t> vertices, frame_stride;
    bool remesh = false;

    void attach(CLI::App* app) {
        app->add_option("--scenario", scenario, "rankine, kirchhoff, armed or contour");
        app->add_option("--name", name, "run name (subdirectory of --out)");
        app->add_option("--r", r, "Rankine radius");
        app->add_option("--vertices,--M", vertices, "vertex count for rankine/kirchhoff");
        app->add_option("--a", a, "Kirchhoff semi-axis along x");
        app->add_option("--b", b, "Kirchhoff semi-axis along y");
        app->add_option("--m", m, "arm count");
        app->add_option("--N", N, "arm length");
        app->add_option("--gamma", gamma, "combined arm area");
        app->add_option("--resolution", resolution, "armed-patch vertex spacing");
        app->add_option("--contour", contour, "contour CSV for the contour scenario");
        app->add_option("--T", T, "final time");
        app->add_option("--dt", dt, "time step");
        app->add_option("--frame-stride", frame_stride, "steps between frames");
        app->add_flag("--remesh", remesh, "remesh between steps");
    }

    void apply(json& j) const {
        if (scenario) j["scenario"] = *scenario;
        if (name) j["name"] = *name;
        if (r) j["patch"]["r"] = *r;
        if (vertices) j["patch"]["vertices"] = *vertices;
        if (a) j["patch"]["a"] = *a;
        if (b) j["patch"]["b"] = *b;
        if (m) j["patch"]["m"] = *m;
        if (N) j["patch"]["N"] = *N;
        if (gamma) j["patch"]["gamma"] = *gamma;
        if (resolution) j["patch"]["resolution"] = *resolution;
        if (contour) j["patch"]["contour_file"] = *contour;
        if (T) j["numerics"]["T"] = *T;
        if (dt) j["numerics"]["dt"] = *dt;
        if (frame_stride) j["numerics"]["frame_stride"] = *frame_stride;
        if (remesh) j["numerics"]["remesh"] = true;
    }
};

json load_config_json(const Globals& g) {
    if (g.config.empty()) return json::object();
    std::ifstream in(g.config);
    if (!in) throw InvalidInput("cannot read config file " + g.config);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("config file " + g.config + " is not valid JSON: " + e.what());
    }
}

RunConfig make_config(const Globals& g, const Overrides& o) {
    json j = load_config_json(g);
    o.apply(j);
    if (g.seed) j["seed"] = *g.seed;
    return config_from_json(j);
}

void write_json(const fs::path& path, const json& j) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t next = s.find(',', pos);
        const std::string item = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidInput("not a number: '" + item + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return v;
}

int cmd_build(const Globals& g, const Overrides& o) {
    const RunConfig c = make_config(g, o);
    const Patch p = build_patch(c);
    const fs::path dir = fs::path(g.out) / c.name;
    fs::create_directories(dir);
    write_contour_csv((dir / "patch.csv").string(), p.boundary());
    json report = patch_report(c, p);
    report["config"] = to_json(c);
    write_json(dir / "patch_report.json", report);
    const json& f = report["functionals"];
    std::printf("%s: %zu vertices, mass %.10f, perimeter %.6f, delta %.3e, energy deficit %.3e\n",
                to_string(c.scenario).c_str(), p.vertex_count(), f["mass"].get<double>(),
                f["perimeter"].get<double>(), f["delta"].get<double>(), report["energy_deficit"].get<double>());
    std::printf("wrote %s\n", (dir / "patch_report.json").string().c_str());
    return kOk;
}

int cmd_evolve(const Globals& g, const Overrides& o, bool fresh) {
    const RunConfig c = make_config(g, o);
    const fs::path dir = fs::path(g.out) / c.name;
    const EvolveResult r = evolve(c, dir, !fresh);
    const FlowState& last = r.frames.back();
    std::printf("%s%zu frames up to t = %g, perimeter %.6f, mass drift %.3e\n", r.resumed ? "resumed; " : "",
                r.frames.size(), last.t, last.report.perimeter, last.report.mass - r.frames.front().report.mass);
    if (!r.spread.empty()) {
        std::size_t unsound = 0;
        for (const SpreadRow& s : r.spread) unsound += s.bound.bound > s.perimeter;
        std::printf("spread bound: last %.6f, frames with bound > perimeter: %zu\n", r.spread.back().bound.bound,
                    unsound);
    }
    if (r.drift) {
        std::printf("bucket drift: %zu markers, window %g, max window change %d, exceptions %zu\n", r.drift->markers,
                    r.drift->window, r.drift->max_window_change, r.drift->exceptions);
    }
    std::printf("run directory %s\n", dir.string().c_str());
    if (r.halted) {
        std::fprintf(stderr, "run halted: %s\n", r.diagnostic.c_str());
        return kRuntime;
    }
    return kOk;
}

struct VerifyOptions {
    std::size_t mfold = 100;
    std::size_t momentum = 20;
    std::size_t energy = 12;
    std::size_t layer_samples = 10'000'000;
    std::string sharpness = "0.01,0.02,0.05,0.08,0.1";
    double momentum_I = 20.0;
};

int cmd_verify(const Globals& g, const VerifyOptions& v) {
    const std::uint64_t seed = g.seed.value_or(20240611);
    std::mt19937_64 rng(seed);
    json doc{{"version", version_string()}, {"seed", seed}};
    std::size_t violations = 0;

    std::vector<SymmetricPatch> mfold;
    for (std::size_t i = 0; i < v.mfold; ++i) {
        const int m = 2 + static_cast<int>(i % 5);
        mfold.push_back({random_mfold_patch(m, rng), m});
    }
    const InequalityReport mf = check_mfold_bound(mfold);
    violations += mf.violations;
    doc["mfold"] = to_json(mf);
    std::printf("m-fold bound: %zu cases, %zu violations, min eps/delta %.4f\n", mf.corpus_size, mf.violations,
                mf.min_ratio);

    std::vector<Patch> centred;
    for (std::size_t i = 0; i < v.momentum; ++i) centred.push_back(random_centered_patch(rng));
    for (double d : {0.05, 0.1}) centred.push_back(sharpness_family(d));
    const MomentumReport mo = check_momentum_bound(centred, v.momentum_I);
    violations += mo.report.violations;
    doc["momentum"] = to_json(mo.report);
    doc["momentum"]["I"] = mo.I;
    doc["momentum"]["constant"] = {{"small_branch", mo.constant.small_branch},
                                   {"large_branch", mo.constant.large_branch},
                                   {"combined", mo.constant.combined()}};
    std::printf("momentum bound: %zu cases, %zu violations, min eps/delta^2 %.4f (constant %.4g)\n",
                mo.report.corpus_size, mo.report.violations, mo.report.min_ratio, mo.constant.combined());

    const SharpnessSweep sw = sharpness_sweep(parse_list(v.sharpness));
    doc["sharpness"] = {{"parameters", sw.parameters},
                        {"deltas", sw.deltas},
                        {"epsilons", sw.epsilons},
                        {"fit", to_json(sw.fit)},
                        {"in_range", sw.fit.slope >= 1.8 && sw.fit.slope <= 2.2}};
    std::printf("sharpness: log-log slope %.4f (range [1.8, 2.2])\n", sw.fit.slope);

    std::vector<Patch> energy_corpus;
    for (std::size_t i = 0; i < v.energy; ++i) {
        energy_corpus.push_back(i % 2 == 0 ? random_mfold_patch(2 + static_cast<int>(i / 2 % 5), rng)
                                           : random_centered_patch(rng));
    }
    const EnergyBoundReport en = check_energy_bound(energy_corpus);
    violations += en.report.violations;
    doc["energy"] = to_json(en.report);
    doc["energy"]["deficits"] = en.deficits;
    doc["energy"]["epsilons"] = en.epsilons;
    std::printf("energy deficit bound: %zu cases, %zu violations, min deficit/eps^2 %.4g\n", en.report.corpus_size,
                en.report.violations, en.report.min_ratio);

    const LayerCheck lc = layer_reconstruction_check(kirchhoff_ellipse(std::sqrt(2.0), 1.0 / std::sqrt(2.0), 512), 4.0,
                                                     v.layer_samples, seed);
    doc["layer_check"] = {{"patch", "2:1 ellipse"},
                          {"layered", lc.layered},
                          {"reference", lc.reference},
                          {"discrepancy", lc.discrepancy},
                          {"standard_error", lc.standard_error}};
    std::printf("layered energy on the 2:1 ellipse: discrepancy %.3e\n", lc.discrepancy);

    doc["violations"] = violations;
    const fs::path path = fs::path(g.out) / "verify.json";
    write_json(path, doc);
    std::printf("wrote %s\n", path.string().c_str());
    return violations > 0 ? kViolation : kOk;
}

int cmd_diagnose(const Globals& g, const Overrides& o, const std::string& frame, std::size_t n_r, std::size_t n_theta) {
    const RunConfig c = make_config(g, o);
    const FlowState s = frame.empty() ? initial_state(build_patch(c))
                                      : initial_state(Patch(read_contour_csv(frame)));
    DiagnosticGrid grid;
    grid.n_r = n_r;
    grid.n_theta = n_theta;
    const VelocityDiagnostics d = velocity_diagnostics(s, grid);
    json doc{{"version", version_string()},
             {"source", frame.empty() ? to_string(c.scenario) : frame},
             {"diagnostics", to_json(d)},
             {"spread", to_json(winding_spread_bound(s, c.diagnostics.spread_r0))},
             {"perimeter", perimeter(s.boundary)}};
    const fs::path path = fs::path(g.out) / c.name / "diagnose.json";
    write_json(path, doc);
    std::printf("eps~ %.4e  sup|u-u*| %.4e  sup|u_theta| %.4f  L2(u_theta-mu) %.4e  L2(u_r/r) %.4e\n", d.eps_tilde,
                d.sup_deviation, d.sup_u_theta, d.l2_u_theta, d.l2_u_r_over_r);
    std::printf("wrote %s\n", path.string().c_str());
    return kOk;
}

int cmd_sweep(const Globals& g, const Overrides& o, const std::string& gammas) {
    RunConfig c = make_config(g, o);
    if (c.scenario != Scenario::armed) throw InvalidInput("sweep runs over gamma and needs --scenario armed");
    std::vector<double> ln_delta, ln_sup;
    json rows = json::array();
    const fs::path dir = fs::path(g.out) / c.name;
    fs::create_directories(dir);
    std::ofstream csv(dir / "sweep.csv");
    csv << "gamma,delta,sup_deviation,l2_u_theta,l2_u_r_over_r,sup_u_theta\n";
    for (double gamma : parse_list(gammas)) {
        c.patch.armed.gamma = gamma;
        const FlowState s = initial_state(build_patch(c));
        const VelocityDiagnostics d = velocity_diagnostics(s);
        ln_delta.push_back(std::log(d.eps_tilde));
        ln_sup.push_back(std::log(d.sup_deviation));
        json row = to_json(d);
        row["gamma"] = gamma;
        rows.push_back(row);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", gamma, d.eps_tilde, d.sup_deviation,
                      d.l2_u_theta, d.l2_u_r_over_r, d.sup_u_theta);
        csv << buf;
        std::printf("gamma %-8g delta %.4e sup|u-u*| %.4e\n", gamma, d.eps_tilde, d.sup_deviation);
    }
    const LineFit fit = fit_line(ln_delta, ln_sup);
    write_json(dir / "sweep.json", {{"version", version_string()}, {"rows", rows}, {"fit", to_json(fit)}});
    std::printf("log-log slope of sup|u-u*| against delta: %.4f\n", fit.slope);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vortex patch contour dynamics and stability diagnostics"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory");
    app.add_option("--seed", g.seed, "seed of the single random generator");
    app.add_option("--threads", g.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);

    Overrides ov;
    CLI::App* build = app.add_subcommand("build", "build a patch and write its contour and property report");
    ov.attach(build);
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "run contour dynamics into a (resumable) run directory");
    ov.attach(evolve_cmd);
    bool fresh = false;
    evolve_cmd->add_flag("--fresh", fresh, "discard an existing run directory instead of resuming");

    VerifyOptions vo;
    CLI::App* verify = app.add_subcommand("verify", "check the stability inequalities on random corpora");
    verify->add_option("--mfold-count", vo.mfold, "m-fold symmetric corpus size");
    verify->add_option("--momentum-count", vo.momentum, "centred corpus size");
    verify->add_option("--energy-count", vo.energy, "energy-deficit corpus size");
    verify->add_option("--layer-samples", vo.layer_samples, "Monte Carlo pairs of the layered-energy check");
    verify->add_option("--sharpness", vo.sharpness, "comma-separated delta values of the sharpness family");
    verify->add_option("--momentum-I", vo.momentum_I, "second-moment bound I");

    CLI::App* diagnose = app.add_subcommand("diagnose", "velocity diagnostics of a patch or a frame");
    ov.attach(diagnose);
    std::string frame;
    std::size_t n_r = 160, n_theta = 256;
    diagnose->add_option("--frame", frame, "boundary CSV to diagnose instead of the configured patch");
    diagnose->add_option("--n-r", n_r, "radial grid size");
    diagnose->add_option("--n-theta", n_theta, "angular grid size");

    CLI::App* sweep = app.add_subcommand("sweep", "gamma sweep of the velocity deviation at t = 0");
    ov.attach(sweep);
    std::string gammas = "0.0125,0.025,0.05,0.1,0.2";
    sweep->add_option("--gammas", gammas, "comma-separated arm areas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        if (*build) return cmd_build(g, ov);
        if (*evolve_cmd) return cmd_evolve(g, ov, fresh);
        if (*verify) return cmd_verify(g, vo);
        if (*diagnose) return cmd_diagnose(g, ov, frame, n_r, n_theta);
        if (*sweep) return cmd_sweep(g, ov, gammas);
    } catch (const InvalidInput& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kInvalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
    return kRuntime;
}

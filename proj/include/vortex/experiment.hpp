#pragma once

// Run configuration, patch construction from a config, and the run-directory pipeline shared by
// the command-line tool, the acceptance driver and the Python module.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortex/dynamics.hpp"
#include "vortex/errors.hpp"
#include "vortex/patch_builder.hpp"
#include "vortex/stability.hpp"
#include "vortex/winding.hpp"

namespace vortex {

using json = nlohmann::json;

// Version string written into every manifest.
std::string version_string();

enum class Scenario { rankine, kirchhoff, armed, contour };
Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

struct PatchConfig {
    double r = 1.0;                 // rankine radius
    std::size_t vertices = 512;     // rankine / kirchhoff vertex count
    double a = 1.4142135623730951;  // kirchhoff semi-axes (2:1, area pi)
    double b = 0.7071067811865476;
    ArmedPatchSpec armed;
    std::string contour_file;       // CSV of x,y rows
};

struct DiagnosticsConfig {
    bool winding = true;         // bucket series and drift report (needs markers)
    double spread_r0 = 1.0;      // radius threshold of the spread bound
    double drift_window = 0.0;   // Delta; 0 picks min(1 + N, 1 / delta0) / 2
    int monitor_exponent = 2;    // delta_t^k / deficit_0
};

struct RunConfig {
    Scenario scenario = Scenario::rankine;
    std::string name = "run";
    PatchConfig patch;
    RunOptions numerics;  // on_frame is ignored
    std::optional<std::vector<Annulus>> annuli;  // unset: scenario defaults
    DiagnosticsConfig diagnostics;
    std::uint64_t seed = 20240611;
};

// Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig config_from_json(const json& j);
json to_json(const RunConfig& c);
// Throws InvalidInput unless every numeric field is positive and consistent.
void validate(const RunConfig& c);

// Default marker annuli: [1, 2] and [0.8 (1 + N), 1 + N] for the armed patch, [1, 2] and [2, 3] otherwise.
std::vector<Annulus> marker_annuli(const RunConfig& c);

Patch build_patch(const RunConfig& c);
// Mass, moments, perimeter, deviation, energy deficit and (for the armed patch) its construction report.
json patch_report(const RunConfig& c, const Patch& p);

json to_json(const FunctionalReport& r);
json to_json(const InequalityReport& r);
json to_json(const LineFit& f);
json to_json(const VelocityDiagnostics& d);
json to_json(const SpreadBound& s);
json to_json(const MonitorReport& m);

// Marker table with full precision, for checkpoints.
void write_markers_csv(const std::filesystem::path& path, const std::vector<LiftedMarker>& markers);
std::vector<LiftedMarker> read_markers_csv(const std::filesystem::path& path);

struct SpreadRow {
    double t = 0.0;
    SpreadBound bound;
    double perimeter = 0.0;
};

struct DriftSummary {
    double window = 0.0;
    std::size_t markers = 0;      // exterior markers with a series
    std::size_t truncated = 0;    // markers that entered the patch
    std::size_t windows = 0;      // (marker, t) pairs with t + Delta inside the run
    std::size_t exceptions = 0;   // pairs with |N(t + Delta) - N(t)| >= 3
    int max_window_change = 0;
    int max_abs_change = 0;
    std::size_t fallbacks = 0;    // assignments by the theta-interval rule, all frames
};

struct EvolveResult {
    std::filesystem::path directory;
    std::vector<FlowState> frames;
    bool halted = false;
    bool complete = false;
    std::string diagnostic;
    bool resumed = false;
    std::vector<SpreadRow> spread;
    std::optional<DriftSummary> drift;
    std::optional<MonitorReport> monitor;
};

// Runs (or resumes) the experiment in `directory`: frame_<k>.csv, markers_<k>.csv,
// manifest.json, spread.csv, winding.csv and drift.json. The directory is locked for the
// duration (RunLocked when another process holds it). Resuming requires the stored config to
// match `c`; a completed run is reloaded without integrating.
EvolveResult evolve(const RunConfig& c, const std::filesystem::path& directory, bool resume = true);

class RunLocked : public Error {
public:
    using Error::Error;
};

}  // namespace vortex

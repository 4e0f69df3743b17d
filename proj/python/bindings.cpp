#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "vortex/dynamics.hpp"
#include "vortex/errors.hpp"
#include "vortex/experiment.hpp"
#include "vortex/functionals.hpp"
#include "vortex/geometry.hpp"
#include "vortex/patch_builder.hpp"
#include "vortex/winding.hpp"

namespace py = pybind11;
using namespace vortex;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Vec2> to_points(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw InvalidInput("expected an (n, 2) array of points");
    std::vector<Vec2> v(static_cast<std::size_t>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) v[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
    return v;
}

Array to_array(const std::vector<Vec2>& v) {
    Array a({static_cast<py::ssize_t>(v.size()), py::ssize_t{2}});
    auto w = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        w(static_cast<py::ssize_t>(i), 0) = v[i].x;
        w(static_cast<py::ssize_t>(i), 1) = v[i].y;
    }
    return a;
}

py::dict report_dict(const FunctionalReport& r) {
    py::dict d;
    d["mass"] = r.mass;
    d["center"] = py::make_tuple(r.center.x, r.center.y);
    d["angular_momentum"] = r.angular_momentum;
    d["pseudo_energy"] = r.pseudo_energy;
    d["perimeter"] = r.perimeter;
    d["delta"] = r.delta;
    d["epsilon"] = r.epsilon;
    return d;
}

// JSON text in, JSON text out keeps the Python side free of a second schema.
py::object json_loads(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Contour dynamics of vortex patches with stability diagnostics";
    // Translators run newest first, so the subclass goes last.
    py::register_exception<Error>(m, "VortexError", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

    m.attr("__version__") = version_string();

    py::class_<Patch>(m, "Patch")
        .def(py::init([](const Array& vertices) { return Patch(Contour(to_points(vertices), true)); }),
             py::arg("vertices"))
        .def_property_readonly("vertices", [](const Patch& p) { return to_array(p.boundary().vertices()); })
        .def_property_readonly("components", [](const Patch& p) { return p.components().size(); })
        .def("__len__", &Patch::vertex_count)
        .def("area", [](const Patch& p) { return area(p); })
        .def("perimeter", [](const Patch& p) { return perimeter(p); })
        .def("moments", [](const Patch& p) {
            const Moments mo = moments(p);
            return py::make_tuple(mo.mass, py::make_tuple(mo.first.x, mo.first.y), mo.second);
        })
        .def("translated", [](const Patch& p, double x, double y) { return p.translated({x, y}); })
        .def("rotated", &Patch::rotated)
        .def("scaled", &Patch::scaled);

    m.def("rankine", &rankine, py::arg("r") = 1.0, py::arg("vertices") = 512);
    m.def("kirchhoff_ellipse", &kirchhoff_ellipse, py::arg("a"), py::arg("b"), py::arg("vertices") = 512);
    m.def(
        "armed_patch",
        [](int arms, double N, double gamma, double resolution) {
            ArmedPatchSpec s;
            s.m = arms;
            s.N = N;
            s.gamma = gamma;
            s.resolution = resolution;
            return armed_patch(s);
        },
        py::arg("m") = 3, py::arg("N") = 5.0, py::arg("gamma") = 0.05, py::arg("resolution") = 0.02);
    m.def("max_feasible_gamma", &max_feasible_gamma, py::arg("m"), py::arg("N"));

    m.def("pseudo_energy", &pseudo_energy, py::arg("patch"), py::arg("tol") = 1e-10);
    m.def("energy_deficit", &energy_deficit, py::arg("patch"), py::arg("tol") = 1e-10);
    m.def("disk_symmetric_difference",
          [](const Patch& p, double cx, double cy, double r) { return disk_symmetric_difference(p, Disk{{cx, cy}, r}); },
          py::arg("patch"), py::arg("cx"), py::arg("cy"), py::arg("r"));
    m.def(
        "nearest_disk_deviation",
        [](const Patch& p) {
            const NearestDisk d = nearest_disk_deviation(p);
            return py::make_tuple(d.epsilon, py::make_tuple(d.a.x, d.a.y));
        },
        py::arg("patch"));
    m.def("functional_report", [](const Patch& p) { return report_dict(functional_report(p)); }, py::arg("patch"));

    m.def(
        "velocity",
        [](const Patch& p, const Array& points) {
            const std::vector<Vec2> pts = to_points(points);
            std::vector<Vec2> u;
            for (const VelocitySample& s : boundary_velocity(p, pts)) u.push_back(s.u);
            return to_array(u);
        },
        py::arg("patch"), py::arg("points"));
    m.def("rankine_mu", [](double r) { return rankine_mu(r); }, py::arg("r"));

    m.def(
        "run",
        [](const Patch& p, double T, double dt, std::size_t frame_stride, bool remesh) {
            RunOptions o;
            o.T = T;
            o.dt = dt;
            o.frame_stride = frame_stride;
            o.remesh = remesh;
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(p, {}, o);
            }
            py::list frames;
            for (const FlowState& f : r.frames) {
                py::dict d;
                d["t"] = f.t;
                d["vertices"] = to_array(f.boundary.vertices());
                d["report"] = report_dict(f.report);
                frames.append(d);
            }
            py::dict out;
            out["frames"] = frames;
            out["halted"] = r.halted;
            out["diagnostic"] = r.diagnostic;
            return out;
        },
        py::arg("patch"), py::arg("T"), py::arg("dt"), py::arg("frame_stride") = 100, py::arg("remesh") = false);

    m.def(
        "spread_bound",
        [](const Patch& p, double r0) {
            const SpreadBound b = winding_spread_bound(initial_state(p), r0);
            return py::make_tuple(b.spread, b.bound);
        },
        py::arg("patch"), py::arg("r0") = 1.0);
    m.def(
        "velocity_diagnostics",
        [](const Patch& p) { return json_loads(to_json(velocity_diagnostics(initial_state(p)))); },
        py::arg("patch"));

    m.def(
        "evolve",
        [](const std::string& config_json, const std::string& directory, bool resume) {
            const RunConfig c = config_from_json(json::parse(config_json));
            EvolveResult r;
            {
                py::gil_scoped_release release;
                r = evolve(c, directory, resume);
            }
            py::dict out;
            out["frames"] = r.frames.size();
            out["final_t"] = r.frames.back().t;
            out["halted"] = r.halted;
            out["diagnostic"] = r.diagnostic;
            out["resumed"] = r.resumed;
            return out;
        },
        py::arg("config_json"), py::arg("directory"), py::arg("resume") = true);
}

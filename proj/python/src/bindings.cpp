#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geopath/error.hpp"
#include "geopath/evolve.hpp"
#include "geopath/io.hpp"
#include "geopath/ionmodel.hpp"
#include "geopath/paths.hpp"
#include "geopath/planner.hpp"
#include "geopath/synth.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace geopath;

namespace {

GateSpec spec_of(const std::vector<double>& axis, double gamma) {
  if (axis.size() != 3) throw Error(ErrorKind::InvalidArgument, "axis must have 3 components");
  return GateSpec::normalized(Vec3(axis[0], axis[1], axis[2]), gamma);
}

GateKind kind_of(const std::string& k) {
  if (k == "one") return GateKind::OneQubit;
  if (k == "two") return GateKind::TwoQubit;
  throw Error(ErrorKind::InvalidArgument, "kind must be 'one' or 'two'");
}

LengthConvention convention_of(const std::string& c) {
  if (c == "spherical") return LengthConvention::Spherical;
  if (c == "paramsum") return LengthConvention::ParamSum;
  throw Error(ErrorKind::InvalidArgument, "convention must be 'spherical' or 'paramsum'");
}

py::dict report_dict(const EvolutionReport& r) {
  return py::dict("final_unitary"_a = r.final_unitary, "fidelity"_a = r.fidelity,
                  "holonomy"_a = r.phases_principal, "holonomy_continuous"_a = r.phases_continuous,
                  "pt_residual_max"_a = r.pt_residual_max,
                  "cyclicity_defect"_a = r.cyclicity_defect,
                  "unitarity_defect"_a = r.unitarity_defect, "solid_angle"_a = r.solid_angle,
                  "length_spherical"_a = r.length_spherical,
                  "length_paramsum"_a = r.length_paramsum, "time_times_cap"_a = r.time_times_cap,
                  "pulse_areas"_a = r.pulse_areas, "n_steps"_a = r.n_steps);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometric gate synthesis, simulation and planning";

  static py::exception<Error> exc(m, "GeopathError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (kind, message)
      PyErr_SetObject(exc.ptr(), py::make_tuple(to_string(e.kind()), e.what()).ptr());
    }
  });

  m.attr("__version__") = tool_version();
  m.def("parse_angle", [](const std::string& s) { return parse_angle(s); });
  m.def("gate_matrix",
        [](const std::vector<double>& axis, double gamma) {
          return gate_from_spec(spec_of(axis, gamma)).matrix();
        },
        "axis"_a, "gamma"_a, "exp(-i gamma n.sigma)");
  m.def("gate_fidelity", [](const Matrix& u, const Matrix& v) { return gate_fidelity(u, v); });

  py::class_<ParamCurve>(m, "Curve")
      .def_static("from_json",
                  [](const std::string& text) { return curve_from_json(Json::parse(text)); })
      .def("to_json", [](const ParamCurve& c) { return curve_to_json(c).dump(); })
      .def_property_readonly("tau", &ParamCurve::tau)
      .def_property_readonly("n_segments",
                             [](const ParamCurve& c) { return c.segments().size(); })
      .def("is_closed", [](const ParamCurve& c) { return c.is_closed(); })
      .def("point", [](const ParamCurve& c, double t) { return Vec3(c.at(t).r); }, "t"_a)
      .def("solid_angle_phase", [](const ParamCurve& c) { return solid_angle_phase(c); })
      .def("length",
           [](const ParamCurve& c, const std::string& conv) {
             return path_length(c, convention_of(conv));
           },
           "convention"_a = "spherical")
      .def("pulse_areas", [](const ParamCurve& c) { return pulse_areas(c); })
      .def("hamiltonian",
           [](const ParamCurve& c, double t, const std::string& kind) {
             const HamiltonianSchedule s = kind_of(kind) == GateKind::TwoQubit
                                               ? twoqubit_hamiltonian(c)
                                               : onequbit_hamiltonian(c);
             return s.at(t).matrix();
           },
           "t"_a, "kind"_a = "one");

  py::class_<PathPlan>(m, "Plan")
      .def_property_readonly("family", [](const PathPlan& p) { return to_string(p.family); })
      .def_readonly("curve", &PathPlan::curve)
      .def_readonly("theta_mid", &PathPlan::theta_mid)
      .def_readonly("gamma", &PathPlan::predicted_gamma)
      .def_readonly("length_spherical", &PathPlan::length_spherical)
      .def_readonly("length_paramsum", &PathPlan::length_paramsum)
      .def_readonly("time_estimate", &PathPlan::time_estimate)
      .def_readonly("pulse_areas", &PathPlan::pulse_areas);

  auto opts = [](double cap) {
    PlanOptions o;
    o.amp_cap = cap;
    return o;
  };
  m.def("plan_orange_slice",
        [opts](const std::vector<double>& axis, double gamma, double cap) {
          return plan_orange_slice(spec_of(axis, gamma), opts(cap));
        },
        "axis"_a, "gamma"_a, "cap"_a = 1.0);
  m.def("plan_three_segment",
        [opts](const std::vector<double>& axis, double gamma, double theta_mid, double cap) {
          return plan_three_segment(spec_of(axis, gamma), theta_mid, opts(cap));
        },
        "axis"_a, "gamma"_a, "theta_mid"_a, "cap"_a = 1.0);
  m.def("plan_min_circle",
        [opts](const std::vector<double>& axis, double gamma, double cap) {
          return plan_min_circle(spec_of(axis, gamma), opts(cap));
        },
        "axis"_a, "gamma"_a, "cap"_a = 1.0);

  m.def("simulate",
        [](const ParamCurve& curve, const std::vector<double>& axis, double gamma,
           const std::string& kind, int n_steps) {
          PropagatorConfig cfg;
          cfg.n_steps = n_steps;
          const GateSpec target = spec_of(axis, gamma);
          const GateKind k = kind_of(kind);
          EvolutionReport r;
          {
            py::gil_scoped_release release;
            r = run_geometric_gate(curve, k, target, cfg);
          }
          return report_dict(r);
        },
        "curve"_a, "axis"_a, "gamma"_a, "kind"_a = "one", "n_steps"_a = 4096);

  m.def("ion_check",
        [](double eta, double omega, const std::vector<double>& ratios, int n_max, double area,
           const std::string& drive) {
          if (drive != "constant" && drive != "sine_squared") {
            throw Error(ErrorKind::InvalidArgument, "drive must be 'constant' or 'sine_squared'");
          }
          const DriveShape shape =
              drive == "constant" ? DriveShape::Constant : DriveShape::SineSquared;
          std::vector<ReductionRow> rows;
          {
            py::gil_scoped_release release;
            rows = reduction_sweep(eta, omega, ratios, n_max, area, shape);
          }
          py::list out;
          for (const ReductionRow& r : rows) {
            out.append(py::dict("R"_a = r.ratio, "subspace_fidelity"_a = r.report.subspace_fidelity,
                                "leakage"_a = r.report.leakage,
                                "phase_error"_a = r.report.phase_error,
                                "worst_infidelity"_a = r.report.worst_infidelity));
          }
          return out;
        },
        "eta"_a = 0.05, "omega"_a = 1.0, "ratios"_a = std::vector<double>{10.0, 20.0, 40.0},
        "n_max"_a = 5, "area"_a = kPi / 4.0, "drive"_a = "sine_squared");
}

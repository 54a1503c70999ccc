#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "paultrap/errors.hpp"
#include "paultrap/mode.hpp"
#include "paultrap/special.hpp"
#include "paultrap/states_cartesian.hpp"
#include "paultrap/states_cylindrical.hpp"
#include "paultrap/suites.hpp"
#include "paultrap/trap.hpp"

namespace py = pybind11;
using namespace paultrap;

namespace {

py::list suite_to_pylist(const SuiteResult& result) {
  py::list out;
  for (const auto& r : result.residuals) {
    py::dict d;
    d["check"] = r.check;
    d["params"] = r.params;
    d["max_abs"] = r.max_abs;
    d["rms"] = r.rms;
    d["interior_points"] = r.interior_points;
    d["tol"] = r.tol;
    d["pass"] = r.pass;
    out.append(d);
  }
  for (const auto& c : result.checks) {
    py::dict d;
    d["check"] = c.check;
    d["params"] = c.params;
    d["max_abs"] = c.max_abs;
    d["rms"] = c.rms;
    d["tol"] = c.tol;
    d["pass"] = c.pass;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_paultrap, m) {
  m.doc() = "Exact time-dependent quantum states of the three-dimensional "
            "Paul trap: mode functions, stability charts, number states, "
            "and operator verification.";

  py::register_exception<SelectionRuleError>(m, "SelectionRuleError",
                                             PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericsError>(m, "NumericsError",
                                        PyExc_RuntimeError);

  // ---- trap model ----------------------------------------------------
  py::class_<TrapConfig>(m, "TrapConfig")
      .def(py::init([](double e, double r0, double vdc, double vac,
                       double omega, double t0) {
             TrapConfig c{e, r0, vdc, vac, omega, t0};
             c.validate();
             return c;
           }),
           py::arg("e") = 1.0, py::arg("r0") = 1.0, py::arg("vdc") = 0.0,
           py::arg("vac") = 0.0, py::arg("omega") = 1.0, py::arg("t0") = 0.0)
      .def_readwrite("e", &TrapConfig::e)
      .def_readwrite("r0", &TrapConfig::r0)
      .def_readwrite("vdc", &TrapConfig::vdc)
      .def_readwrite("vac", &TrapConfig::vac)
      .def_readwrite("omega", &TrapConfig::omega)
      .def_readwrite("t0", &TrapConfig::t0)
      .def("validate", &TrapConfig::validate)
      .def("__repr__", [](const TrapConfig& c) {
        nlohmann::json j = {{"e", c.e},     {"r0", c.r0},
                            {"vdc", c.vdc}, {"vac", c.vac},
                            {"omega", c.omega}, {"t0", c.t0}};
        return "TrapConfig(" + j.dump() + ")";
      });

  py::class_<Couplings>(m, "Couplings")
      .def_readonly("g", &Couplings::g)
      .def_readonly("g3", &Couplings::g3);

  py::class_<MathieuParams>(m, "MathieuParams")
      .def_readonly("a_r", &MathieuParams::a_r)
      .def_readonly("q_r", &MathieuParams::q_r)
      .def_readonly("a_z", &MathieuParams::a_z)
      .def_readonly("q_z", &MathieuParams::q_z);

  m.def("drive_voltage", &drive_voltage, py::arg("cfg"), py::arg("t"));
  m.def("coupling", &coupling, py::arg("cfg"), py::arg("t"));
  m.def("mathieu_params", &mathieu_params, py::arg("cfg"));
  m.def("drive_period", &drive_period, py::arg("cfg"));
  m.def("trap_from_mathieu", &trap_from_mathieu, py::arg("a_r"),
        py::arg("q_r"), py::arg("omega"), py::arg("e") = 1.0,
        py::arg("r0") = 1.0, py::arg("t0") = 0.0);
  m.def("trap_from_json", &trap_from_json_string, py::arg("text"));
  m.def("radial_coupling", &radial_coupling, py::arg("cfg"));
  m.def("axial_coupling", &axial_coupling, py::arg("cfg"));
  m.def("coupling_from_mathieu", &coupling_from_mathieu, py::arg("a"),
        py::arg("q"), py::arg("omega"), py::arg("t0") = 0.0);

  // ---- special functions ----------------------------------------------
  m.def("hermite", &hermite, py::arg("n"), py::arg("x"));
  m.def("glaguerre", &glaguerre, py::arg("k"), py::arg("alpha"), py::arg("x"));
  m.def("log_factorial", &log_factorial, py::arg("n"));

  // ---- mode dynamics ----------------------------------------------------
  py::enum_<Axis>(m, "Axis")
      .value("radial", Axis::radial)
      .value("axial", Axis::axial);

  py::class_<ModeSolution>(m, "ModeSolution")
      .def_readonly("axis", &ModeSolution::axis)
      .def_readonly("t", &ModeSolution::t)
      .def_readonly("xi", &ModeSolution::xi)
      .def_readonly("xi_dot", &ModeSolution::xi_dot)
      .def_readonly("phi", &ModeSolution::phi)
      .def_readonly("phi_dot", &ModeSolution::phi_dot)
      .def_readonly("theta", &ModeSolution::theta)
      .def_readonly("wronskian_drift", &ModeSolution::wronskian_drift)
      .def("in_span", &ModeSolution::in_span)
      .def("__len__", [](const ModeSolution& m_) { return m_.t.size(); });

  py::class_<ModePoint>(m, "ModePoint")
      .def_readonly("xi", &ModePoint::xi)
      .def_readonly("xi_dot", &ModePoint::xi_dot)
      .def_readonly("phi", &ModePoint::phi)
      .def_readonly("phi_dot", &ModePoint::phi_dot)
      .def_readonly("theta", &ModePoint::theta);

  m.def("sho_mode", &sho_mode, py::arg("omega_ref"), py::arg("times"));
  m.def("default_ic", &default_ic, py::arg("coupling"), py::arg("t_start"));
  m.def(
      "integrate_mode",
      [](const CouplingFn& coupling, Complex xi0, Complex xi_dot0,
         double t_start, double t_end, std::size_t samples, Axis axis,
         double rel_tol, double abs_tol, double wronskian_tol) {
        IntegrateOptions opt{rel_tol, abs_tol, wronskian_tol};
        return integrate_mode(coupling, xi0, xi_dot0, t_start, t_end, samples,
                              axis, opt);
      },
      py::arg("coupling"), py::arg("xi0"), py::arg("xi_dot0"),
      py::arg("t_start"), py::arg("t_end"), py::arg("samples"),
      py::arg("axis") = Axis::radial, py::arg("rel_tol") = 1e-12,
      py::arg("abs_tol") = 1e-12, py::arg("wronskian_tol") = 1e-9);
  m.def("mode_at", &mode_at, py::arg("mode"), py::arg("t"));

  py::class_<FloquetResult>(m, "FloquetResult")
      .def_readonly("multiplier1", &FloquetResult::multiplier1)
      .def_readonly("multiplier2", &FloquetResult::multiplier2)
      .def_readonly("trace", &FloquetResult::trace)
      .def_readonly("det", &FloquetResult::det)
      .def_readonly("stable", &FloquetResult::stable)
      .def_readonly("marginal", &FloquetResult::marginal);

  m.def("floquet_stability", &floquet_stability, py::arg("coupling"),
        py::arg("period"), py::arg("rel_tol") = 1e-12);

  py::class_<SweepRange>(m, "SweepRange")
      .def(py::init<double, double, std::size_t>(), py::arg("min"),
           py::arg("max"), py::arg("count"));

  py::class_<StabilityChart>(m, "StabilityChart")
      .def_readonly("p1", &StabilityChart::p1)
      .def_readonly("p2", &StabilityChart::p2)
      .def_readonly("trace_r", &StabilityChart::trace_r)
      .def_readonly("trace_z", &StabilityChart::trace_z)
      .def_readonly("stable_r", &StabilityChart::stable_r)
      .def_readonly("stable_z", &StabilityChart::stable_z)
      .def_readonly("stable_trap", &StabilityChart::stable_trap)
      .def("index", &StabilityChart::index);

  m.def("stability_scan", &stability_scan, py::arg("template_cfg"),
        py::arg("a_range"), py::arg("q_range"));

  // ---- states ----------------------------------------------------
  py::class_<CartesianQN>(m, "CartesianQN")
      .def(py::init<int, int, int>(), py::arg("nx"), py::arg("ny"),
           py::arg("nz"))
      .def_readonly("nx", &CartesianQN::nx)
      .def_readonly("ny", &CartesianQN::ny)
      .def_readonly("nz", &CartesianQN::nz);

  py::class_<PolarQN>(m, "PolarQN")
      .def(py::init<int, int>(), py::arg("n"), py::arg("m"))
      .def_readonly("n", &PolarQN::n)
      .def_readonly("m", &PolarQN::m);

  py::class_<CylindricalQN>(m, "CylindricalQN")
      .def(py::init<int, int>(), py::arg("n_r"), py::arg("l_z"))
      .def_readonly("n_r", &CylindricalQN::n_r)
      .def_readonly("l_z", &CylindricalQN::l_z)
      .def_property_readonly("l", &CylindricalQN::l)
      .def_property_readonly("k", &CylindricalQN::k);

  py::class_<ScaledCoords>(m, "ScaledCoords")
      .def_readonly("sx", &ScaledCoords::sx)
      .def_readonly("sy", &ScaledCoords::sy)
      .def_readonly("sz", &ScaledCoords::sz)
      .def_readonly("st", &ScaledCoords::st);

  m.def("scale_coords", &scale_coords, py::arg("radial"), py::arg("axial"),
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("t"));
  m.def("z_extremal", &z_extremal, py::arg("axial"), py::arg("z"),
        py::arg("t"));
  m.def("z_state", &z_state, py::arg("axial"), py::arg("n"), py::arg("z"),
        py::arg("t"), py::arg("n_max") = kDefaultNMax);
  m.def("xy_state", &xy_state, py::arg("radial"), py::arg("n"),
        py::arg("coord"), py::arg("t"), py::arg("n_max") = kDefaultNMax);
  m.def(
      "psi_cartesian",
      [](const ModeSolution& radial, const ModeSolution& axial, int nx, int ny,
         int nz, double x, double y, double z, double t) {
        return psi_cartesian(radial, axial, {nx, ny, nz}, x, y, z, t);
      },
      py::arg("radial"), py::arg("axial"), py::arg("nx"), py::arg("ny"),
      py::arg("nz"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("t"));

  m.def("polar_to_cyl", &polar_to_cyl, py::arg("qn"));
  m.def("cyl_to_polar", &cyl_to_polar, py::arg("qn"));
  m.def(
      "omega_state",
      [](const ModeSolution& radial, int n, int mm, double r, double theta,
         double t) { return omega_state(radial, {n, mm}, r, theta, t); },
      py::arg("radial"), py::arg("n"), py::arg("m"), py::arg("r"),
      py::arg("theta"), py::arg("t"));
  m.def(
      "radial_state",
      [](const ModeSolution& radial, int n_r, int l_z, double r, double t) {
        return radial_state(radial, {n_r, l_z}, r, t);
      },
      py::arg("radial"), py::arg("n_r"), py::arg("l_z"), py::arg("r"),
      py::arg("t"));
  m.def("theta_state", &theta_state, py::arg("l_z"), py::arg("theta"));
  m.def(
      "phi_cylindrical",
      [](const ModeSolution& radial, const ModeSolution& axial, int n_r,
         int l_z, int n_z, double r, double theta, double z, double t) {
        return phi_cylindrical(radial, axial, {n_r, l_z}, n_z, r, theta, z, t);
      },
      py::arg("radial"), py::arg("axial"), py::arg("n_r"), py::arg("l_z"),
      py::arg("n_z"), py::arg("r"), py::arg("theta"), py::arg("z"),
      py::arg("t"));

  py::class_<LevelInfo>(m, "LevelInfo")
      .def_readonly("count", &LevelInfo::count)
      .def_readonly("states", &LevelInfo::states);
  m.def("level_degeneracy", &level_degeneracy, py::arg("N"));

  // ---- verification ----------------------------------------------------
  m.def(
      "run_suite",
      [](const TrapConfig& cfg, const std::string& suite) {
        const SuiteResult result = run_suite(cfg, suite);
        py::dict out;
        out["checks"] = suite_to_pylist(result);
        out["notes"] = result.notes;
        out["all_pass"] = result.all_pass();
        return out;
      },
      py::arg("cfg"), py::arg("suite"),
      "Run a verification suite (sho | driven | negative | full) and "
      "return its report.");

  m.def("linspace", &linspace, py::arg("a"), py::arg("b"), py::arg("n"));

  m.attr("__version__") = "0.1.0";
}

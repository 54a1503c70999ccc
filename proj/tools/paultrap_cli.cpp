// paultrap: Paul-trap mode functions, stability charts, number-state
// sampling, and self-verification, all emitting plot-ready data files.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure
// (Wronskian drift / overflow), 3 selection-rule violation, 4 verification
// check failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "paultrap/errors.hpp"
#include "paultrap/io.hpp"
#include "paultrap/mode.hpp"
#include "paultrap/states_cartesian.hpp"
#include "paultrap/states_cylindrical.hpp"
#include "paultrap/suites.hpp"
#include "paultrap/trap.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace paultrap;

namespace {

struct ModeIc {
  Complex xi;
  Complex xi_dot;
};

struct RunConfig {
  TrapConfig trap;
  std::optional<ModeIc> radial_ic;
  std::optional<ModeIc> axial_ic;
  IntegrateOptions integrate;
};

ModeIc parse_mode_ic(const json& j, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (key != "xi" && key != "xi_dot")
      throw ConfigError(where + ": unknown key \"" + key + "\"");
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
        !value[1].is_number())
      throw ConfigError(where + ": \"" + key + "\" must be [re, im]");
  }
  if (!j.contains("xi") || !j.contains("xi_dot"))
    throw ConfigError(where + ": needs keys xi and xi_dot");
  return {Complex(j["xi"][0].get<double>(), j["xi"][1].get<double>()),
          Complex(j["xi_dot"][0].get<double>(), j["xi_dot"][1].get<double>())};
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config: invalid JSON in " + path);
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "trap" && key != "mode_ic" && key != "tolerances")
      throw ConfigError("config: unknown key \"" + key + "\"");
    (void)value;
  }
  if (!j.contains("trap")) throw ConfigError("config: missing \"trap\" object");

  RunConfig rc;
  rc.trap = trap_from_json(j["trap"]);
  if (j.contains("mode_ic")) {
    const json& m = j["mode_ic"];
    for (const auto& [key, value] : m.items()) {
      if (key == "radial")
        rc.radial_ic = parse_mode_ic(value, "mode_ic.radial");
      else if (key == "axial")
        rc.axial_ic = parse_mode_ic(value, "mode_ic.axial");
      else
        throw ConfigError("mode_ic: unknown key \"" + key + "\"");
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number()) throw ConfigError("tolerances: values must be numbers");
      if (key == "rel")
        rc.integrate.rel_tol = value.get<double>();
      else if (key == "abs")
        rc.integrate.abs_tol = value.get<double>();
      else if (key == "wronskian")
        rc.integrate.wronskian_tol = value.get<double>();
      else
        throw ConfigError("tolerances: unknown key \"" + key + "\"");
    }
  }
  return rc;
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse \"" + item + "\"");
    }
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

// "min:max:count[,min:max:count...]"
std::vector<AxisGrid> parse_grid_spec(const std::string& text) {
  std::vector<AxisGrid> axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    double lo, hi;
    long count;
    char c1, c2;
    std::stringstream ps(part);
    if (!(ps >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' ||
        count < 2 || !(hi > lo))
      throw ConfigError("grid: bad axis spec \"" + part + "\"");
    axes.push_back({lo, hi, static_cast<std::size_t>(count)});
  }
  if (axes.empty()) throw ConfigError("grid: empty spec");
  return axes;
}

// like the grid spec, but a degenerate range (min == max) is allowed so a
// parameter can be held fixed
std::pair<SweepRange, SweepRange> parse_sweep_spec(const std::string& text) {
  std::vector<SweepRange> ranges;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    double lo, hi;
    long count;
    char c1, c2;
    std::stringstream ps(part);
    if (!(ps >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' ||
        count < 2 || hi < lo)
      throw ConfigError("sweep: bad range spec \"" + part + "\"");
    ranges.push_back({lo, hi, static_cast<std::size_t>(count)});
  }
  if (ranges.size() != 2)
    throw ConfigError("sweep: expected \"p1min:p1max:n1,p2min:p2max:n2\"");
  return {ranges[0], ranges[1]};
}

struct StateSpec {
  bool cartesian = true;
  CartesianQN cart;
  CylindricalQN cyl;
  int nz = 0;
};

StateSpec parse_state_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("state: expected \"cart:nx,ny,nz\" or \"cyl:nr,lz,nz\"");
  const std::string kind = text.substr(0, colon);
  const std::vector<double> nums =
      parse_number_list(text.substr(colon + 1), "state");
  if (nums.size() != 3) throw ConfigError("state: expected three quantum numbers");
  StateSpec s;
  if (kind == "cart") {
    s.cartesian = true;
    s.cart = {static_cast<int>(nums[0]), static_cast<int>(nums[1]),
              static_cast<int>(nums[2])};
    if (s.cart.nx < 0 || s.cart.ny < 0 || s.cart.nz < 0)
      throw ConfigError("state: quantum numbers must be >= 0");
  } else if (kind == "cyl") {
    s.cartesian = false;
    s.cyl = {static_cast<int>(nums[0]), static_cast<int>(nums[1])};
    s.nz = static_cast<int>(nums[2]);
    if (s.nz < 0) throw ConfigError("state: n_z must be >= 0");
    cyl_to_polar(s.cyl);  // throws SelectionRuleError on bad parity
  } else {
    throw ConfigError("state: unknown coordinate system \"" + kind + "\"");
  }
  return s;
}

ModeSolution make_mode(const RunConfig& rc, Axis axis, double t_end,
                       std::size_t samples) {
  const CouplingFn cpl = axis == Axis::radial ? radial_coupling(rc.trap)
                                              : axial_coupling(rc.trap);
  const auto& override_ic =
      axis == Axis::radial ? rc.radial_ic : rc.axial_ic;
  Complex xi0, xid0;
  if (override_ic) {
    xi0 = override_ic->xi;
    xid0 = override_ic->xi_dot;
  } else {
    std::tie(xi0, xid0) = default_ic(cpl, rc.trap.t0);
  }
  return integrate_mode(cpl, xi0, xid0, rc.trap.t0, t_end, samples, axis,
                        rc.integrate);
}

int cmd_evolve(const RunConfig& rc, const fs::path& out_dir, double t_span,
               std::size_t samples) {
  if (!(t_span > 0.0)) throw ConfigError("evolve: --t-end must be > 0");
  if (samples < 2) throw ConfigError("evolve: --samples must be >= 2");
  fs::create_directories(out_dir);
  const double t_end = rc.trap.t0 + t_span;
  write_mode_csv(out_dir / "mode_radial.csv",
                 make_mode(rc, Axis::radial, t_end, samples));
  write_mode_csv(out_dir / "mode_axial.csv",
                 make_mode(rc, Axis::axial, t_end, samples));
  return 0;
}

int cmd_stability(const RunConfig& rc, const fs::path& out_dir,
                  const std::string& sweep_spec) {
  const auto [a_range, q_range] = parse_sweep_spec(sweep_spec);
  const StabilityChart chart = stability_scan(rc.trap, a_range, q_range);
  fs::create_directories(out_dir);
  write_chart_csv(out_dir / "stability.csv", chart);
  return 0;
}

int cmd_sample(const RunConfig& rc, const fs::path& out_dir,
               const std::string& state_spec, const std::string& grid_spec,
               const std::string& times_spec) {
  const StateSpec state = parse_state_spec(state_spec);
  const std::vector<AxisGrid> axes = parse_grid_spec(grid_spec);
  const std::vector<double> times = parse_number_list(times_spec, "times");
  for (double t : times) {
    if (t < rc.trap.t0)
      throw ConfigError("times: samples before t0 are outside the mode span");
  }
  const double t_max = *std::max_element(times.begin(), times.end());
  const double pad = std::max(0.05 * drive_period(rc.trap), 1e-3);
  const double t_end = t_max + pad;
  const std::size_t samples = static_cast<std::size_t>(
      std::max(1001.0, std::ceil((t_end - rc.trap.t0) / 0.005) + 1));

  fs::create_directories(out_dir);
  const bool needs_axial = state.cartesian || axes.size() == 3;
  ModeSolution radial = make_mode(rc, Axis::radial, t_end, samples);
  ModeSolution axial;
  if (needs_axial) axial = make_mode(rc, Axis::axial, t_end, samples);

  if (state.cartesian) {
    if (axes.size() == 1) {
      // Psi along the z axis line x = y = 0
      std::vector<FieldSample1D> rows;
      for (double t : times) {
        for (std::size_t i = 0; i < axes[0].count; ++i) {
          const double z = axes[0].at(i);
          rows.push_back(
              {z, t, psi_cartesian(radial, axial, state.cart, 0, 0, z, t)});
        }
      }
      write_field_csv_1d(out_dir / "field.csv", "z", rows);
    } else if (axes.size() == 3) {
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        std::vector<Complex> data;
        data.reserve(axes[0].count * axes[1].count * axes[2].count);
        // first axis fastest
        for (std::size_t iz = 0; iz < axes[2].count; ++iz)
          for (std::size_t iy = 0; iy < axes[1].count; ++iy)
            for (std::size_t ix = 0; ix < axes[0].count; ++ix)
              data.push_back(psi_cartesian(radial, axial, state.cart,
                                           axes[0].at(ix), axes[1].at(iy),
                                           axes[2].at(iz), t));
        write_field_json_3d(
            out_dir / ("field_t" + std::to_string(ti) + ".json"),
            {{"x", axes[0].min, axes[0].max, axes[0].count},
             {"y", axes[1].min, axes[1].max, axes[1].count},
             {"z", axes[2].min, axes[2].max, axes[2].count}},
            t, data);
      }
    } else {
      throw ConfigError("sample: cartesian states take a 1- or 3-axis grid");
    }
  } else {
    const PolarQN polar = cyl_to_polar(state.cyl);
    if (axes.size() == 2) {
      // Omega_{n,m} on the (r, theta) grid
      std::vector<FieldSamplePolar> rows;
      for (double t : times) {
        for (std::size_t ir = 0; ir < axes[0].count; ++ir) {
          for (std::size_t jt = 0; jt < axes[1].count; ++jt) {
            const double r = axes[0].at(ir);
            const double th = axes[1].at(jt);
            rows.push_back({r, th, t, omega_state(radial, polar, r, th, t)});
          }
        }
      }
      write_field_csv_polar(out_dir / "field.csv", rows);
    } else if (axes.size() == 3) {
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        std::vector<Complex> data;
        data.reserve(axes[0].count * axes[1].count * axes[2].count);
        for (std::size_t iz = 0; iz < axes[2].count; ++iz)
          for (std::size_t jt = 0; jt < axes[1].count; ++jt)
            for (std::size_t ir = 0; ir < axes[0].count; ++ir)
              data.push_back(phi_cylindrical(radial, axial, state.cyl,
                                             state.nz, axes[0].at(ir),
                                             axes[1].at(jt), axes[2].at(iz),
                                             t));
        write_field_json_3d(
            out_dir / ("field_t" + std::to_string(ti) + ".json"),
            {{"r", axes[0].min, axes[0].max, axes[0].count},
             {"theta", axes[1].min, axes[1].max, axes[1].count},
             {"z", axes[2].min, axes[2].max, axes[2].count}},
            t, data);
      }
    } else {
      throw ConfigError("sample: cylindrical states take a 2- or 3-axis grid");
    }
  }
  return 0;
}

int cmd_verify(const RunConfig& rc, const fs::path& out_dir,
               const std::string& suite) {
  const SuiteResult result = run_suite(rc.trap, suite);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "verify_report.json");
    out << suite_to_json(result).dump(2) << '\n';
  }
  {
    json meta;
    meta["tool"] = "paultrap";
    meta["suite"] = suite;
    meta["trap"] = {{"e", rc.trap.e},     {"r0", rc.trap.r0},
                    {"vdc", rc.trap.vdc}, {"vac", rc.trap.vac},
                    {"omega", rc.trap.omega}, {"t0", rc.trap.t0}};
    meta["notes"] = result.notes;
    meta["all_pass"] = result.all_pass();
    std::ofstream out(out_dir / "verify_meta.json");
    out << meta.dump(2) << '\n';
  }
  for (const auto& r : result.residuals) {
    std::printf("[%s] %-44s max_abs=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL",
                r.check.c_str(), r.max_abs, r.tol);
  }
  for (const auto& c : result.checks) {
    std::printf("[%s] %-44s max_abs=%.3e tol=%.1e\n", c.pass ? "PASS" : "FAIL",
                (c.check + (c.params.empty() ? "" : "(" + c.params + ")")).c_str(),
                c.max_abs, c.tol);
  }
  return result.all_pass() ? 0 : 4;
}

int cmd_lattice(const fs::path& out_dir, int levels) {
  if (levels < 0) throw ConfigError("lattice: --levels must be >= 0");
  fs::create_directories(out_dir);
  write_lattice_csv(out_dir / "lattice.csv", levels);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact time-dependent quantum states of the 3-D Paul trap"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  double t_end = 0.0;
  std::size_t samples = 2001;
  std::string grid_spec, times_spec = "0", state_spec, sweep_spec;
  std::string suite = "full";
  int levels = 10;
  // trap overrides, flag > file
  std::optional<double> ov_e, ov_r0, ov_vdc, ov_vac, ov_omega, ov_t0;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "run configuration JSON");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--e", ov_e, "override trap charge");
    cmd->add_option("--r0", ov_r0, "override trap radius");
    cmd->add_option("--vdc", ov_vdc, "override dc voltage");
    cmd->add_option("--vac", ov_vac, "override ac amplitude");
    cmd->add_option("--omega", ov_omega, "override drive frequency");
    cmd->add_option("--t0", ov_t0, "override drive phase reference");
  };

  CLI::App* evolve = app.add_subcommand("evolve", "integrate the mode functions");
  add_common(evolve, true);
  evolve->add_option("--t-end", t_end, "integration span from t0 (default 10 drive periods)");
  evolve->add_option("--samples", samples, "number of stored samples");

  CLI::App* stability = app.add_subcommand("stability", "Floquet stability chart over (a_r, q_r)");
  add_common(stability, true);
  stability->add_option("--sweep", sweep_spec, "a_r and q_r ranges: amin:amax:na,qmin:qmax:nq")->required();

  CLI::App* sample = app.add_subcommand("sample", "sample number-state wavefunctions");
  add_common(sample, true);
  sample->add_option("--state", state_spec, "cart:nx,ny,nz or cyl:nr,lz,nz")->required();
  sample->add_option("--grid", grid_spec, "min:max:count per axis, comma separated")->required();
  sample->add_option("--times", times_spec, "comma-separated sample times");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, true);
  verify->add_option("--suite", suite, "sho | driven | negative | full");

  CLI::App* lattice = app.add_subcommand("lattice", "emit the allowed quantum-number lattice");
  add_common(lattice, false);
  lattice->add_option("--levels", levels, "largest level N to emit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    RunConfig rc;
    if (!config_path.empty()) {
      rc = load_run_config(config_path);
      if (ov_e) rc.trap.e = *ov_e;
      if (ov_r0) rc.trap.r0 = *ov_r0;
      if (ov_vdc) rc.trap.vdc = *ov_vdc;
      if (ov_vac) rc.trap.vac = *ov_vac;
      if (ov_omega) rc.trap.omega = *ov_omega;
      if (ov_t0) rc.trap.t0 = *ov_t0;
      rc.trap.validate();
    }

    if (evolve->parsed()) {
      if (t_end <= 0.0) t_end = 10.0 * drive_period(rc.trap);
      return cmd_evolve(rc, out_dir, t_end, samples);
    }
    if (stability->parsed()) return cmd_stability(rc, out_dir, sweep_spec);
    if (sample->parsed())
      return cmd_sample(rc, out_dir, state_spec, grid_spec, times_spec);
    if (verify->parsed()) return cmd_verify(rc, out_dir, suite);
    if (lattice->parsed()) return cmd_lattice(out_dir, levels);
    return 1;
  } catch (const SelectionRuleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

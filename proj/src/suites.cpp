#include "paultrap/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "paultrap/errors.hpp"
#include "paultrap/special.hpp"
#include "paultrap/states_cylindrical.hpp"

namespace paultrap {

namespace {

// Per-copy cache of the last-used time slice; grid sweeps hit the same t
// for a whole field fill, so this removes almost all mode_at calls.
struct Memo {
  const ModeSolution* mode;
  mutable double last_t = std::numeric_limits<double>::quiet_NaN();
  mutable ModePoint mp{};

  explicit Memo(const ModeSolution& m) : mode(&m) {}
  const ModePoint& at(double t) const {
    if (t != last_t) {
      mp = mode_at(*mode, t);
      last_t = t;
    }
    return mp;
  }
};

std::size_t count_for(double lo, double hi, double h) {
  return static_cast<std::size_t>(std::lround((hi - lo) / h)) + 1;
}

GridSpec grid_1d(double lo, double hi, double h, std::vector<double> times) {
  GridSpec g;
  g.axes = {{lo, hi, count_for(lo, hi, h)}};
  g.times = std::move(times);
  return g;
}

GridSpec grid_box3(double half, double h, std::vector<double> times) {
  GridSpec g;
  const std::size_t n = count_for(-half, half, h);
  g.axes = {{-half, half, n}, {-half, half, n}, {-half, half, n}};
  g.times = std::move(times);
  return g;
}

// r starts at 4.5 h, clear of the axis guard after count rounding.
GridSpec grid_polar(double r_hi, double hr, std::size_t ntheta,
                    std::vector<double> times) {
  GridSpec g;
  const double r_lo = 4.5 * hr;
  g.axes = {{r_lo, r_hi, count_for(r_lo, r_hi, hr)},
            {0.0, 2.0 * std::numbers::pi, ntheta}};
  g.times = std::move(times);
  return g;
}

GridSpec grid_xy(double half, double h, std::vector<double> times) {
  GridSpec g;
  const std::size_t n = count_for(-half, half, h);
  g.axes = {{-half, half, n}, {-half, half, n}};
  g.times = std::move(times);
  return g;
}

void add(SuiteResult& out, ResidualReport r) { out.residuals.push_back(std::move(r)); }
void add(SuiteResult& out, CheckReport r) { out.checks.push_back(std::move(r)); }
void add(SuiteResult& out, std::vector<CheckReport> rs) {
  for (auto& r : rs) out.checks.push_back(std::move(r));
}

double max_phi(const ModeSolution& mode) {
  return *std::max_element(mode.phi.begin(), mode.phi.end());
}

// ---- sho suite -----------------------------------------------------------

SuiteResult sho_suite() {
  SuiteResult out;
  const ModeSolution mode = sho_mode(1.0, linspace(0.0, 6.0, 601));
  const CouplingFn g = [](double) { return 0.5; };
  const std::vector<double> slices = {0.4, 1.3};
  const std::vector<double> one_slice = {0.7};

  add(out, schrodinger_residual_1d(axis_state_sampler(mode, 0), g,
                                   grid_1d(-6, 6, 0.01, slices), 1e-6,
                                   "residual_1d[Z0,sho]"));
  add(out, schrodinger_residual_1d(axis_state_sampler(mode, 1), g,
                                   grid_1d(-6, 6, 0.01, slices), 1e-4,
                                   "residual_1d[Z1,sho]"));
  add(out, schrodinger_residual_1d(axis_state_sampler(mode, 3), g,
                                   grid_1d(-7, 7, 0.01, slices), 1e-4,
                                   "residual_1d[Z3,sho]"));

  add(out, schrodinger_residual_3d_cartesian(
               psi_sampler(mode, mode, {0, 0, 0}), g, g,
               grid_box3(0.6, 0.01, one_slice), 1e-5, "residual_3d[psi000,sho]"));
  add(out, schrodinger_residual_3d_cartesian(
               psi_sampler(mode, mode, {1, 2, 1}), g, g,
               grid_box3(0.6, 0.01, one_slice), 1e-4, "residual_3d[psi121,sho]"));

  add(out, schrodinger_residual_polar(omega_sampler(mode, {0, 0}), g,
                                      grid_polar(4.0, 0.01, 128, slices),
                                      1e-5, "residual_polar[omega00,sho]"));
  add(out, schrodinger_residual_polar(omega_sampler(mode, {2, 1}), g,
                                      grid_polar(5.0, 0.01, 128, slices),
                                      1e-4, "residual_polar[omega21,sho]"));

  const GridSpec zgrid = grid_1d(-8, 8, 0.01, slices);
  for (auto& r : ladder_check_z(mode, 0, zgrid, 1e-7)) {
    r.check += "[sho]";
    add(out, std::move(r));
  }
  add(out, ladder_check_z(mode, 1, zgrid, 1e-6));
  add(out, ladder_check_z(mode, 2, zgrid, 1e-6));

  const Sampler1D gaussian = [](double z, double) {
    return Complex(std::exp(-0.5 * z * z), 0.0);
  };
  const Sampler1D hermite_mod = [](double z, double) {
    return Complex(0.2 * hermite(2, z) * std::exp(-0.5 * z * z), 0.0);
  };
  add(out, commutator_check(mode, gaussian, zgrid, 1e-6, "gaussian"));
  add(out, commutator_check(mode, axis_state_sampler(mode, 1), zgrid, 1e-6, "Z1"));
  add(out, commutator_check(mode, hermite_mod, zgrid, 1e-6, "hermite2"));

  const GridSpec xy = grid_xy(5.5, 0.01, one_slice);
  add(out, polar_ladder_check(mode, {0, 0}, xy, 1e-7));
  add(out, polar_ladder_check(mode, {1, 0}, xy, 1e-6));
  add(out, polar_ladder_check(mode, {2, 1}, xy, 1e-6));

  add(out, eigen_check(mode, {0, 0}, xy, 1e-5));
  add(out, eigen_check(mode, {1, 2}, xy, 1e-5));

  const std::vector<double> norm_times = linspace(0.5, 5.5, 5);
  add(out, norm_conservation_1d(axis_state_sampler(mode, 0),
                                grid_1d(-8, 8, 0.01, norm_times), 1e-6,
                                "norm_1d[Z0,sho]"));
  add(out, norm_conservation_1d(axis_state_sampler(mode, 2),
                                grid_1d(-9, 9, 0.01, norm_times), 1e-6,
                                "norm_1d[Z2,sho]"));
  add(out, norm_conservation_3d(psi_sampler(mode, mode, {1, 1, 1}),
                                Measure::cartesian,
                                grid_box3(7.0, 0.1, norm_times), 1e-5,
                                "norm_3d[psi111,sho]"));
  return out;
}

// ---- driven suite --------------------------------------------------------

struct DrivenModes {
  ModeSolution radial;
  ModeSolution axial;
  bool radial_ok = false;
  bool axial_ok = false;
  CouplingFn g;
  CouplingFn g3;
  std::vector<double> slices;
  std::vector<double> norm_times;
};

DrivenModes make_driven_modes(const TrapConfig& cfg) {
  cfg.validate();
  DrivenModes dm;
  dm.g = radial_coupling(cfg);
  dm.g3 = axial_coupling(cfg);
  const double T = drive_period(cfg);
  const FloquetResult fr = floquet_stability(dm.g, T);
  const FloquetResult fz = floquet_stability(dm.g3, T);
  dm.radial_ok = fr.stable;
  dm.axial_ok = fz.stable;
  if (!dm.radial_ok && !dm.axial_ok)
    throw ConfigError("driven suite: no Floquet-stable axis in this configuration");

  const double t0 = cfg.t0;
  const double t1 = cfg.t0 + 3.0 * T;
  const std::size_t samples = count_for(t0, t1, 0.005);
  if (dm.radial_ok) {
    const auto [xi0, xidot0] = default_ic(dm.g, t0);
    dm.radial = integrate_mode(dm.g, xi0, xidot0, t0, t1, samples, Axis::radial);
  }
  if (dm.axial_ok) {
    const auto [xi0, xidot0] = default_ic(dm.g3, t0);
    dm.axial = integrate_mode(dm.g3, xi0, xidot0, t0, t1, samples, Axis::axial);
  }
  dm.slices = {t0 + 0.31 * T, t0 + 1.77 * T};
  dm.norm_times = linspace(t0 + 0.1 * T, t0 + 2.9 * T, 10);
  return dm;
}

SuiteResult driven_suite(const TrapConfig& cfg) {
  SuiteResult out;
  DrivenModes dm = make_driven_modes(cfg);

  if (dm.axial_ok) {
    const ModeSolution& mz = dm.axial;
    const double s = std::sqrt(max_phi(mz));
    add(out, schrodinger_residual_1d(axis_state_sampler(mz, 0), dm.g3,
                                     grid_1d(-4 * s, 4 * s, 0.01, dm.slices),
                                     1e-4, "residual_1d[Z0,driven]"));
    add(out, schrodinger_residual_1d(axis_state_sampler(mz, 2), dm.g3,
                                     grid_1d(-5 * s, 5 * s, 0.01, dm.slices),
                                     1e-4, "residual_1d[Z2,driven]"));

    const GridSpec zgrid = grid_1d(-8 * s, 8 * s, 0.01, dm.slices);
    for (auto& r : ladder_check_z(mz, 0, zgrid, 1e-7)) {
      r.check += "[driven]";
      add(out, std::move(r));
    }
    add(out, ladder_check_z(mz, 1, zgrid, 1e-6));

    const Sampler1D hermite_mod = [s](double z, double) {
      return Complex(0.2 * hermite(2, z / s) * std::exp(-0.5 * z * z / (s * s)),
                     0.0);
    };
    add(out, commutator_check(mz, hermite_mod, zgrid, 1e-6, "hermite2[driven]"));

    add(out, norm_conservation_1d(
                 axis_state_sampler(mz, 0),
                 grid_1d(-12 * s, 12 * s, 0.01 * s, dm.norm_times), 1e-6,
                 "norm_1d[Z0,driven]"));
  } else {
    out.notes.push_back("axial axis Floquet-unstable: axial checks skipped");
  }

  if (dm.radial_ok) {
    const ModeSolution& mr = dm.radial;
    const double s = std::sqrt(max_phi(mr));
    add(out, schrodinger_residual_1d(axis_state_sampler(mr, 1), dm.g,
                                     grid_1d(-5 * s, 5 * s, 0.01, dm.slices),
                                     1e-4, "residual_1d[X1,driven]"));
    add(out, schrodinger_residual_polar(
                 omega_sampler(mr, {1, 1}), dm.g,
                 grid_polar(5.0 * s, 0.01, 128, dm.slices), 1e-4,
                 "residual_polar[omega11,driven]"));

    // size the transverse grid by the slice-local width, not the run max
    const double t_star = dm.slices[0];
    const double s_star = std::sqrt(mode_at(mr, t_star).phi);
    const GridSpec xy = grid_xy(6.0 * s_star, 0.005 * s_star, {t_star});
    add(out, polar_ladder_check(mr, {1, 1}, xy, 1e-6));
    add(out, eigen_check(mr, {1, 1}, xy, 1e-5));
  } else {
    out.notes.push_back("radial axis Floquet-unstable: radial checks skipped");
  }

  if (dm.radial_ok && dm.axial_ok) {
    add(out, schrodinger_residual_3d_cartesian(
                 psi_sampler(dm.radial, dm.axial, {1, 0, 1}), dm.g, dm.g3,
                 grid_box3(0.7, 0.01, {dm.slices[0]}), 1e-4,
                 "residual_3d[psi101,driven]"));
  }
  return out;
}

SuiteResult negative_suite(const TrapConfig& cfg) {
  SuiteResult out;
  DrivenModes dm = make_driven_modes(cfg);
  // run the 1d controls on a stable axis with its own coupling
  const bool use_axial = dm.axial_ok;
  const ModeSolution& mode = use_axial ? dm.axial : dm.radial;
  const CouplingFn& cpl = use_axial ? dm.g3 : dm.g;
  const double s = std::sqrt(max_phi(mode));
  const GridSpec zgrid = grid_1d(-4 * s, 4 * s, 0.01, dm.slices);

  add(out, schrodinger_residual_1d(wrong_width_z0(mode), cpl, zgrid, 1e-4,
                                   "residual_1d[negative:wrong_width]"));
  add(out, schrodinger_residual_1d(unnormalized_z0(mode), cpl, zgrid, 1e-4,
                                   "residual_1d[negative:unnormalized]"));
  if (dm.radial_ok) {
    add(out, schrodinger_residual_3d_cartesian(
                 mismatched_psi(dm.radial, {0, 0, 0}), dm.g, dm.g3,
                 grid_box3(0.6, 0.01, {dm.slices[0]}), 1e-4,
                 "residual_3d[negative:mismatched_modes]"));
    const double sr = std::sqrt(max_phi(dm.radial));
    add(out, schrodinger_residual_polar(
                 wrong_theta_omega(dm.radial, {1, 0}), dm.g,
                 grid_polar(4.0 * sr, 0.01, 128, {dm.slices[0]}), 1e-4,
                 "residual_polar[negative:wrong_theta]"));
  } else {
    out.notes.push_back("radial axis unstable: radial negative controls skipped");
  }
  return out;
}

}  // namespace

bool SuiteResult::all_pass() const {
  for (const auto& r : residuals)
    if (!r.pass) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

SuiteResult run_suite(const TrapConfig& cfg, const std::string& suite) {
  if (suite == "sho") return sho_suite();
  if (suite == "driven") return driven_suite(cfg);
  if (suite == "negative") return negative_suite(cfg);
  if (suite == "full") {
    SuiteResult out = sho_suite();
    SuiteResult driven = driven_suite(cfg);
    for (auto& r : driven.residuals) out.residuals.push_back(std::move(r));
    for (auto& c : driven.checks) out.checks.push_back(std::move(c));
    for (auto& n : driven.notes) out.notes.push_back(std::move(n));
    return out;
  }
  throw ConfigError("unknown verification suite \"" + suite +
                    "\" (expected sho, driven, negative, or full)");
}

nlohmann::json suite_to_json(const SuiteResult& result) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : result.residuals) checks.push_back(residual_to_json(r));
  for (const auto& c : result.checks) checks.push_back(check_to_json(c));
  return checks;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) v.back() = b;
  return v;
}

Sampler1D axis_state_sampler(const ModeSolution& mode, int n) {
  return [memo = Memo(mode), n](double z, double t) {
    return number_state_1d(memo.at(t), n, z);
  };
}

Sampler3D psi_sampler(const ModeSolution& radial, const ModeSolution& axial,
                      const CartesianQN& qn) {
  return [mr = Memo(radial), mz = Memo(axial), qn](double x, double y, double z,
                                                   double t) {
    const ModePoint& pr = mr.at(t);
    return number_state_1d(pr, qn.nx, x) * number_state_1d(pr, qn.ny, y) *
           number_state_1d(mz.at(t), qn.nz, z);
  };
}

SamplerPolar omega_sampler(const ModeSolution& radial, const PolarQN& qn) {
  return [memo = Memo(radial), qn](double r, double theta, double t) {
    return omega_state_at(memo.at(t), qn, r, theta);
  };
}

Sampler1D wrong_width_z0(const ModeSolution& mode) {
  return [memo = Memo(mode)](double z, double t) {
    ModePoint mp = memo.at(t);
    mp.phi *= 2.0;  // deliberately wrong width
    return number_state_1d(mp, 0, z);
  };
}

Sampler1D unnormalized_z0(const ModeSolution& mode) {
  return [memo = Memo(mode)](double z, double t) {
    const ModePoint& mp = memo.at(t);
    const double s2 = z * z / mp.phi;
    const double mag = std::exp(-0.25 * std::log(std::numbers::pi * mp.phi) -
                                0.5 * s2);
    const double phase = 0.25 * s2 * mp.phi_dot;  // no extremal phase factor
    return mag * Complex(std::cos(phase), std::sin(phase));
  };
}

Sampler3D mismatched_psi(const ModeSolution& radial, const CartesianQN& qn) {
  return [mr = Memo(radial), qn](double x, double y, double z, double t) {
    const ModePoint& pr = mr.at(t);
    return number_state_1d(pr, qn.nx, x) * number_state_1d(pr, qn.ny, y) *
           number_state_1d(pr, qn.nz, z);  // radial mode in the z slot
  };
}

SamplerPolar wrong_theta_omega(const ModeSolution& radial, const PolarQN& qn) {
  return [memo = Memo(radial), qn](double r, double theta, double t) {
    return omega_state_at(memo.at(t), qn, r, theta) *
           Complex(std::cos(theta), std::sin(theta));
  };
}

}  // namespace paultrap

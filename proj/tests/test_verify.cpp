#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "paultrap/errors.hpp"
#include "paultrap/special.hpp"
#include "paultrap/states_cartesian.hpp"
#include "paultrap/states_cylindrical.hpp"
#include "paultrap/suites.hpp"
#include "paultrap/trap.hpp"
#include "paultrap/verify.hpp"

using namespace paultrap;

namespace {

const CouplingFn kShoCoupling = [](double) { return 0.5; };

const ModeSolution& sho() {
  static const ModeSolution m = sho_mode(1.0, linspace(0.0, 6.0, 601));
  return m;
}

struct Driven {
  ModeSolution radial;
  ModeSolution axial;
  CouplingFn g;
  CouplingFn g3;
};

const Driven& driven() {
  static const Driven d = [] {
    const TrapConfig cfg = trap_from_mathieu(0.02, 0.3, 2.0);
    Driven out;
    out.g = radial_coupling(cfg);
    out.g3 = axial_coupling(cfg);
    const double t1 = 3.0 * drive_period(cfg);
    const auto icr = default_ic(out.g, 0.0);
    out.radial = integrate_mode(out.g, icr.first, icr.second, 0.0, t1, 2001,
                                Axis::radial);
    const auto icz = default_ic(out.g3, 0.0);
    out.axial = integrate_mode(out.g3, icz.first, icz.second, 0.0, t1, 2001,
                               Axis::axial);
    return out;
  }();
  return d;
}

GridSpec grid1(double lo, double hi, std::size_t n, std::vector<double> times) {
  GridSpec g;
  g.axes = {{lo, hi, n}};
  g.times = std::move(times);
  return g;
}

}  // namespace

TEST_CASE("grid validation catches degenerate grids") {
  GridSpec g = grid1(-1, 1, 8, {0.5});
  CHECK_THROWS_AS(g.validate(1), std::invalid_argument);  // < 9 points
  g.axes[0].count = 51;
  CHECK_THROWS_AS(g.validate(2), std::invalid_argument);  // wrong axis count
  g.times.clear();
  CHECK_THROWS_AS(g.validate(1), std::invalid_argument);  // no time slices
  g.times = {0.5};
  g.dt_probe = 0.0;
  CHECK_THROWS_AS(g.validate(1), std::invalid_argument);
}

TEST_CASE("1d residual: exact states pass, stencil order holds") {
  const GridSpec fine = grid1(-6, 6, 1201, {0.4, 1.3});
  const ResidualReport r0 = schrodinger_residual_1d(
      axis_state_sampler(sho(), 0), kShoCoupling, fine, 1e-6);
  CHECK(r0.pass);
  CHECK(r0.max_abs <= 1e-6);
  CHECK(r0.interior_points == 2 * (1201 - 4));

  const ResidualReport r3 = schrodinger_residual_1d(
      axis_state_sampler(sho(), 3), kShoCoupling, grid1(-7, 7, 1401, {0.4}),
      1e-4);
  CHECK(r3.pass);

  // halving h cuts the residual by the 4th-order factor
  const ResidualReport coarse = schrodinger_residual_1d(
      axis_state_sampler(sho(), 0), kShoCoupling, grid1(-6, 6, 601, {0.4, 1.3}),
      1e-4);
  const double ratio = coarse.max_abs / r0.max_abs;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("1d residual on the driven mode") {
  const ResidualReport r = schrodinger_residual_1d(
      axis_state_sampler(driven().axial, 3), driven().g3,
      grid1(-14, 14, 2801, {0.8, 2.6}), 1e-4);
  CHECK(r.pass);
}

TEST_CASE("1d residual rejects non-solutions by orders of magnitude") {
  const GridSpec g = grid1(-6, 6, 1201, {0.8});

  const ResidualReport exact = schrodinger_residual_1d(
      axis_state_sampler(driven().axial, 0), driven().g3, g, 1e-4);
  CHECK(exact.pass);

  const ResidualReport wrong_width = schrodinger_residual_1d(
      wrong_width_z0(driven().axial), driven().g3, g, 1e-4);
  CHECK(!wrong_width.pass);
  CHECK(wrong_width.max_abs >= 1e-1);
  CHECK(wrong_width.max_abs >= 1e3 * exact.max_abs);

  // the naive (pi phi)^(-1/4) candidate without the phase factor
  const ResidualReport naive = schrodinger_residual_1d(
      unnormalized_z0(driven().axial), driven().g3, g, 1e-4);
  CHECK(!naive.pass);
  CHECK(naive.max_abs >= 1e-2);
}

TEST_CASE("3d residual: products pass, mismatched modes fail") {
  GridSpec g;
  g.axes = {{-0.5, 0.5, 81}, {-0.5, 0.5, 81}, {-0.5, 0.5, 81}};
  g.times = {0.7};

  const ResidualReport ok = schrodinger_residual_3d_cartesian(
      psi_sampler(sho(), sho(), {0, 0, 0}), kShoCoupling, kShoCoupling, g,
      1e-5);
  CHECK(ok.pass);

  const ResidualReport ok2 = schrodinger_residual_3d_cartesian(
      psi_sampler(sho(), sho(), {1, 2, 1}), kShoCoupling, kShoCoupling, g,
      1e-4);
  CHECK(ok2.pass);

  const ResidualReport bad = schrodinger_residual_3d_cartesian(
      mismatched_psi(driven().radial, {0, 0, 0}), driven().g, driven().g3, g,
      1e-4);
  CHECK(!bad.pass);
  CHECK(bad.max_abs >= 1e3 * ok2.max_abs);
}

TEST_CASE("polar residual: exact states pass, wrong winding fails") {
  GridSpec g;
  g.axes = {{0.045, 4.0, 397}, {0.0, 2.0 * std::numbers::pi, 128}};
  g.times = {0.4, 1.3};

  const ResidualReport r00 = schrodinger_residual_polar(
      omega_sampler(sho(), {0, 0}), kShoCoupling, g, 1e-5);
  CHECK(r00.pass);

  const ResidualReport r21 = schrodinger_residual_polar(
      omega_sampler(sho(), {2, 1}), kShoCoupling, g, 1e-4);
  CHECK(r21.pass);

  GridSpec gd;
  gd.axes = {{0.045, 14.0, 1396}, {0.0, 2.0 * std::numbers::pi, 128}};
  gd.times = {0.8};
  const ResidualReport rd = schrodinger_residual_polar(
      omega_sampler(driven().radial, {2, 1}), driven().g, gd, 1e-4);
  CHECK(rd.pass);

  const ResidualReport bad = schrodinger_residual_polar(
      wrong_theta_omega(driven().radial, {1, 0}), driven().g, gd, 1e-4);
  CHECK(!bad.pass);
  CHECK(bad.max_abs >= 1e3 * r21.max_abs);

  GridSpec touching = g;
  touching.axes[0].min = 0.0;
  CHECK_THROWS_AS(schrodinger_residual_polar(omega_sampler(sho(), {0, 0}),
                                             kShoCoupling, touching, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("z ladder actions carry the sqrt factors") {
  const GridSpec g = grid1(-8, 8, 1601, {0.4, 1.3});

  const auto zero = ladder_check_z(sho(), 0, g, 1e-7);
  REQUIRE(zero.size() == 2);
  CHECK(zero[0].pass);  // J_- Z_0 = 0
  CHECK(zero[1].pass);  // J_+ Z_0 = Z_1

  const auto two = ladder_check_z(sho(), 2, g, 1e-6);
  CHECK(two[0].pass);   // J_- Z_2 = sqrt(2) Z_1
  CHECK(two[1].pass);   // J_+ Z_2 = sqrt(3) Z_3

  // driven mode at t != 0
  const GridSpec gd = grid1(-16, 16, 3201, {1.9});
  for (const auto& r : ladder_check_z(driven().axial, 1, gd, 1e-6))
    CHECK(r.pass);

  CHECK_THROWS_AS(ladder_check_z(sho(), -1, g, 1e-6), std::invalid_argument);
}

TEST_CASE("commutator [J-, J+] acts as the identity") {
  const GridSpec g = grid1(-8, 8, 1601, {0.4, 1.3});
  const Sampler1D gaussian = [](double z, double) {
    return Complex(std::exp(-0.5 * z * z), 0.0);
  };
  const Sampler1D hermite_mod = [](double z, double) {
    return Complex(0.2 * hermite(2, z) * std::exp(-0.5 * z * z), 0.0);
  };
  CHECK(commutator_check(sho(), gaussian, g, 1e-6, "gaussian").pass);
  CHECK(commutator_check(sho(), axis_state_sampler(sho(), 1), g, 1e-6, "Z1").pass);

  const GridSpec gd = grid1(-12, 12, 2401, {2.2});
  CHECK(commutator_check(driven().axial, hermite_mod, gd, 1e-6, "driven").pass);
}

TEST_CASE("polar ladder actions and extremal annihilation") {
  GridSpec g;
  g.axes = {{-5.5, 5.5, 1101}, {-5.5, 5.5, 1101}};
  g.times = {0.7};

  const auto extremal = polar_ladder_check(sho(), {0, 0}, g, 1e-7);
  REQUIRE(extremal.size() == 4);
  for (const auto& r : extremal) CHECK(r.pass);  // a-, c- annihilate (0,0)

  // c_- Omega_{2,1} = sqrt(1) Omega_{2,0}; a_+ Omega_{1,0} = sqrt(2) Omega_{2,0}
  for (const auto& r : polar_ladder_check(sho(), {2, 1}, g, 1e-6)) CHECK(r.pass);
  for (const auto& r : polar_ladder_check(sho(), {1, 0}, g, 1e-6)) CHECK(r.pass);
}

TEST_CASE("eigen relations of Lz, K, f, d and the Casimir values") {
  GridSpec g;
  g.axes = {{-5.5, 5.5, 1101}, {-5.5, 5.5, 1101}};
  g.times = {0.7};

  const auto r12 = eigen_check(sho(), {1, 2}, g, 1e-5);
  REQUIRE(r12.size() == 6);
  for (const auto& r : r12) CHECK(r.pass);
  CHECK(r12[0].check == "eigen_Lz");
  CHECK(r12[0].max_abs <= 1e-6);  // eigenvalue m - n = 1
  CHECK(r12[1].check == "eigen_K");
  CHECK(r12[1].max_abs <= 1e-5);  // eigenvalue n + m + 1 = 4

  const auto r00 = eigen_check(sho(), {0, 0}, g, 1e-6);
  for (const auto& r : r00) CHECK(r.pass);  // f = d = 1/2, Casimirs -1/2
}

TEST_CASE("verification reports are invariant under a global phase") {
  const GridSpec g = grid1(-8, 8, 1601, {0.9});
  const Complex phase = std::exp(Complex(0.0, 0.83));
  const Sampler1D base = axis_state_sampler(sho(), 1);
  const Sampler1D rotated = [base, phase](double z, double t) {
    return phase * base(z, t);
  };
  const CheckReport a = commutator_check(sho(), base, g, 1e-6, "base");
  const CheckReport b = commutator_check(sho(), rotated, g, 1e-6, "rot");
  CHECK(std::abs(a.max_abs - b.max_abs) <=
        1e-3 * (a.max_abs + b.max_abs) + 1e-13);

  const ResidualReport ra =
      schrodinger_residual_1d(base, kShoCoupling, g, 1e-4);
  const ResidualReport rb =
      schrodinger_residual_1d(rotated, kShoCoupling, g, 1e-4);
  CHECK(std::abs(ra.max_abs - rb.max_abs) <=
        1e-3 * (ra.max_abs + rb.max_abs) + 1e-13);
}

TEST_CASE("norm conservation and the coverage guard") {
  const CheckReport ok = norm_conservation_1d(
      axis_state_sampler(driven().axial, 0),
      grid1(-40, 40, 4001, linspace(0.3, 4.4, 10)), 1e-6, "z0");
  CHECK(ok.pass);
  CHECK(ok.max_abs <= 1e-6);

  // deliberately truncated grid: ~4 probability sigmas on the widest slice
  CHECK_THROWS_AS(
      norm_conservation_1d(axis_state_sampler(driven().axial, 0),
                           grid1(-16, 16, 1601, linspace(0.3, 4.4, 10)), 1e-6,
                           "truncated"),
      NumericsError);

  GridSpec g3;
  g3.axes = {{-7, 7, 141}, {-7, 7, 141}, {-7, 7, 141}};
  g3.times = {0.6, 2.8};
  const CheckReport n3 =
      norm_conservation_3d(psi_sampler(sho(), sho(), {1, 1, 1}),
                           Measure::cartesian, g3, 1e-5, "psi111");
  CHECK(n3.pass);
}

TEST_CASE("cylindrical-measure norm of the full product state") {
  GridSpec g3;
  g3.axes = {{0.0, 9.0, 181}, {0.0, 2.0 * std::numbers::pi, 64}, {-9, 9, 181}};
  g3.times = {1.1};
  const ModeSolution& m = sho();
  const Sampler3D phi = [&m](double r, double th, double z, double t) {
    return phi_cylindrical(m, m, {2, 2}, 1, r, th, z, t);
  };
  const CheckReport rep =
      norm_conservation_3d(phi, Measure::cylindrical, g3, 1e-5, "phi221");
  CHECK(rep.pass);
}

TEST_CASE("suite runner aggregates and negative suite fails") {
  const TrapConfig cfg = trap_from_mathieu(0.02, 0.3, 2.0);
  const SuiteResult neg = run_suite(cfg, "negative");
  CHECK(!neg.all_pass());
  for (const auto& r : neg.residuals) CHECK(!r.pass);

  CHECK_THROWS_AS(run_suite(cfg, "bogus"), ConfigError);

  // static saddle: axial unstable, so the driven suite notes a skip
  TrapConfig static_cfg;
  static_cfg.vdc = 1.0;
  static_cfg.omega = 2.0 * std::numbers::pi;
  const SuiteResult st = run_suite(static_cfg, "driven");
  CHECK(st.all_pass());
  CHECK(!st.notes.empty());
}

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "paultrap/errors.hpp"
#include "paultrap/mode.hpp"
#include "paultrap/suites.hpp"

using namespace paultrap;

namespace {
constexpr Complex kMinusI(0.0, -1.0);

Complex wronskian(Complex xi, Complex xd) {
  return xi * std::conj(xd) - xd * std::conj(xi);
}

Complex sho_closed_form(double w, double t) {
  return std::polar(1.0 / std::sqrt(2.0 * w), w * t);
}
}  // namespace

TEST_CASE("sho_mode pinned values") {
  const ModeSolution m = sho_mode(1.0, linspace(0.0, 10.0, 1001));
  CHECK(m.xi[0].real() == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(m.xi[0].imag() == 0.0);
  CHECK(m.xi_dot[0].imag() == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(m.phi[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.wronskian_drift <= 1e-14);

  const ModeSolution m2 = sho_mode(2.0, linspace(0.0, 5.0, 501));
  for (std::size_t i = 0; i < m2.t.size(); i += 50) {
    CHECK(m2.phi[i] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(m2.phi_dot[i]) <= 1e-13);
  }
  // unwrapped phase follows omega * t past the principal branch
  const ModePoint late = mode_at(m, 9.5);
  CHECK(late.theta == doctest::Approx(9.5).epsilon(1e-10));

  CHECK_THROWS_AS(sho_mode(0.0, linspace(0, 1, 11)), std::invalid_argument);
  CHECK_THROWS_AS(sho_mode(-1.0, linspace(0, 1, 11)), std::invalid_argument);
  CHECK_THROWS_AS(sho_mode(1.0, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(sho_mode(1.0, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("default_ic pinned values and Wronskian") {
  const auto [xi, xd] = default_ic([](double) { return 0.5; }, 0.0);
  CHECK(xi.real() == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(xd.imag() == doctest::Approx(0.70710678).epsilon(1e-8));

  const auto [xi2, xd2] = default_ic([](double) { return -1.0; }, 0.0);
  CHECK(xi2 == xi);  // fallback omega = 1
  CHECK(xd2 == xd);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> g(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double gv = g(rng);
    const auto [a, b] = default_ic([gv](double) { return gv; }, 0.0);
    CHECK(std::abs(wronskian(a, b) - kMinusI) <= 1e-15);
  }
}

TEST_CASE("integrate_mode reproduces the SHO closed form over 100 units") {
  const CouplingFn g = [](double) { return 0.5; };
  const auto [xi0, xd0] = default_ic(g, 0.0);
  const ModeSolution m = integrate_mode(g, xi0, xd0, 0.0, 100.0, 5001);
  CHECK(m.wronskian_drift <= 1e-9);
  double err = 0.0;
  for (std::size_t i = 0; i < m.t.size(); ++i)
    err = std::max(err, std::abs(m.xi[i] - sho_closed_form(1.0, m.t[i])));
  CHECK(err <= 1e-8);

  // off-knot interpolation against the closed form
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> tt(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = tt(rng);
    const ModePoint mp = mode_at(m, t);
    CHECK(std::abs(mp.xi - sho_closed_form(1.0, t)) <= 1e-8);
    CHECK(mp.phi > 0.0);
  }
}

TEST_CASE("integrate_mode rejects a wrong Wronskian") {
  const CouplingFn g = [](double) { return 0.5; };
  CHECK_THROWS_AS(
      integrate_mode(g, Complex(1.0, 0.0), Complex(0.0, 1.0), 0.0, 1.0, 11),
      std::invalid_argument);
  CHECK_THROWS_AS(integrate_mode(g, Complex(0.0, 0.0), Complex(0.0, 0.0), 0.0,
                                 1.0, 11),
                  std::invalid_argument);
}

TEST_CASE("integrate_mode stays bounded on a Mathieu-stable drive") {
  // a_r = 0, q_r = 0.4 at omega = 2: stable, so |xi| is bounded
  const CouplingFn g = coupling_from_mathieu(0.0, 0.4, 2.0);
  const double T = std::numbers::pi;
  const auto ic = default_ic(g, 0.0);
  const ModeSolution m =
      integrate_mode(g, ic.first, ic.second, 0.0, 50.0 * T, 8001);
  CHECK(m.wronskian_drift <= 1e-9);
  double max_xi = 0.0;
  for (const Complex& x : m.xi) max_xi = std::max(max_xi, std::abs(x));
  CHECK(max_xi < 10.0);
}

TEST_CASE("integrate_mode linearity in the initial conditions") {
  const CouplingFn g = coupling_from_mathieu(0.05, 0.3, 2.0);
  const Complex y0(0.4, -0.2), yd0(0.1, 0.7);
  const Complex c(1.7, -0.9);
  const RawTrajectory base = solve_mode_equation(g, y0, yd0, 0.0, 20.0, 401);
  const RawTrajectory scaled =
      solve_mode_equation(g, c * y0, c * yd0, 0.0, 20.0, 401);
  for (std::size_t i = 0; i < base.t.size(); ++i) {
    CHECK(std::abs(scaled.y[i] - c * base.y[i]) <= 1e-9);
    CHECK(std::abs(scaled.ydot[i] - c * base.ydot[i]) <= 1e-9);
  }
}

TEST_CASE("integrate_mode reports overflow on an unstable drive") {
  const CouplingFn g = [](double) { return -1.0; };  // exponential growth
  const auto ic = default_ic(g, 0.0);
  CHECK_THROWS_AS(
      integrate_mode(g, ic.first, ic.second, 0.0, 400.0, 801), NumericsError);
}

TEST_CASE("mode_at interpolation error stays within 10x integration tol") {
  // cadence 0.005 against the closed form: cubic-Hermite error well under
  // 10 * rel_tol = 1e-11
  const CouplingFn g = [](double) { return 0.5; };
  const auto ic = default_ic(g, 0.0);
  const ModeSolution m = integrate_mode(g, ic.first, ic.second, 0.0, 10.0, 2001);
  double err = 0.0;
  for (double t = 0.00137; t < 10.0; t += 0.0321) {
    const ModePoint mp = mode_at(m, t);
    err = std::max(err, std::abs(mp.xi - sho_closed_form(1.0, t)));
    err = std::max(err, std::abs(mp.xi_dot - Complex(0.0, 1.0) *
                                                 sho_closed_form(1.0, t)));
  }
  CHECK(err <= 1e-11);
}

TEST_CASE("mode_at reproduces knots exactly and rejects out-of-span t") {
  const ModeSolution m = sho_mode(1.3, linspace(0.0, 4.0, 201));
  for (std::size_t i = 0; i < m.t.size(); i += 17) {
    const ModePoint mp = mode_at(m, m.t[i]);
    CHECK(mp.xi == m.xi[i]);
    CHECK(mp.xi_dot == m.xi_dot[i]);
    CHECK(mp.phi == m.phi[i]);
    CHECK(mp.theta == m.theta[i]);
  }
  CHECK_THROWS_AS(mode_at(m, -0.5), std::out_of_range);
  CHECK_THROWS_AS(mode_at(m, 4.5), std::out_of_range);
}

TEST_CASE("floquet multipliers for constant coupling") {
  const double T = 2.0 * std::numbers::pi;
  const FloquetResult stable =
      floquet_stability([](double) { return 0.1; }, T);
  const double expected = 2.0 * std::cos(std::sqrt(0.2) * T);
  CHECK(stable.trace == doctest::Approx(expected).epsilon(1e-10));
  CHECK(stable.stable);
  CHECK(!stable.marginal);
  CHECK(std::abs(stable.det - 1.0) <= 1e-9);
  // unit-circle multipliers, product 1
  CHECK(std::abs(stable.multiplier1 * stable.multiplier2 - 1.0) <= 1e-12);
  CHECK(std::abs(std::abs(stable.multiplier1) - 1.0) <= 1e-12);

  const FloquetResult unstable =
      floquet_stability([](double) { return -0.1; }, T);
  CHECK(unstable.trace ==
        doctest::Approx(2.0 * std::cosh(std::sqrt(0.2) * T)).epsilon(1e-10));
  CHECK(!unstable.stable);

  CHECK_THROWS_AS(floquet_stability([](double) { return 0.1; }, 0.0),
                  std::invalid_argument);
}

TEST_CASE("floquet zero coupling is marginal") {
  const FloquetResult free =
      floquet_stability([](double) { return 0.0; }, 1.0);
  CHECK(free.trace == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(free.marginal);
  CHECK(!free.stable);
}

TEST_CASE("floquet Mathieu classification against the RK4 oracle") {
  const double T = std::numbers::pi;  // drive period at omega = 2
  for (double q : {0.85, 0.95}) {
    const CouplingFn g = coupling_from_mathieu(0.0, q, 2.0);
    const FloquetResult fr = floquet_stability(g, T);
    const double oracle_trace =
        oracle::monodromy_trace([&g](double t) { return 2.0 * g(t); }, T);
    CHECK(fr.trace == doctest::Approx(oracle_trace).epsilon(1e-7));
    CHECK(fr.stable == (std::abs(oracle_trace) < 2.0));
  }
  const FloquetResult s = floquet_stability(coupling_from_mathieu(0.0, 0.85, 2.0), T);
  const FloquetResult u = floquet_stability(coupling_from_mathieu(0.0, 0.95, 2.0), T);
  CHECK(s.stable);
  CHECK(!u.stable);
}

TEST_CASE("floquet determinant stays at 1 for random couplings") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> au(-0.4, 0.4), qu(-0.8, 0.8);
  for (int i = 0; i < 20; ++i) {
    const CouplingFn g = coupling_from_mathieu(au(rng), qu(rng), 2.0);
    const FloquetResult fr = floquet_stability(g, std::numbers::pi);
    CHECK(std::abs(fr.det - 1.0) <= 1e-9);
  }
}

TEST_CASE("stability_scan: static saddle is never confined") {
  TrapConfig tmpl;
  tmpl.omega = 2.0;

  // vdc > 0, vac = 0 (a > 0, q = 0): radial stable, axial unstable
  const StabilityChart pos =
      stability_scan(tmpl, {0.05, 0.6, 4}, {0.0, 0.0, 2});
  for (std::size_t i = 0; i < pos.p1.size(); ++i) {
    for (std::size_t j = 0; j < pos.p2.size(); ++j) {
      const std::size_t c = pos.index(i, j);
      CHECK(pos.stable_r[c] == 1);
      CHECK(pos.stable_z[c] == 0);
      CHECK(pos.stable_trap[c] == 0);
    }
  }

  // vdc < 0: sign flip
  const StabilityChart neg =
      stability_scan(tmpl, {-0.6, -0.05, 4}, {0.0, 0.0, 2});
  for (std::size_t c = 0; c < neg.trace_r.size(); ++c) {
    CHECK(neg.stable_r[c] == 0);
    CHECK(neg.stable_z[c] == 1);
    CHECK(neg.stable_trap[c] == 0);
  }

  CHECK_THROWS_AS(stability_scan(tmpl, {0.0, 1.0, 1}, {0.0, 1.0, 5}),
                  ConfigError);
  CHECK_THROWS_AS(stability_scan(tmpl, {0.0, 1.0, 0}, {0.0, 1.0, 5}),
                  ConfigError);
}

TEST_CASE("stability_scan is deterministic and consistent with floquet") {
  TrapConfig tmpl;
  tmpl.omega = 2.0;
  const StabilityChart a = stability_scan(tmpl, {0.0, 0.1, 3}, {0.2, 0.95, 4});
  const StabilityChart b = stability_scan(tmpl, {0.0, 0.1, 3}, {0.2, 0.95, 4});
  CHECK(a.trace_r == b.trace_r);
  CHECK(a.trace_z == b.trace_z);
  CHECK(a.stable_trap == b.stable_trap);

  // spot-check one cell against a direct floquet call (scan cells run at a
  // slightly looser integrator tolerance)
  const std::size_t c = a.index(1, 2);
  const FloquetResult fr = floquet_stability(
      coupling_from_mathieu(a.p1[1], a.p2[2], 2.0), std::numbers::pi);
  CHECK(a.trace_r[c] == doctest::Approx(fr.trace).epsilon(1e-8));
}

TEST_CASE("stability boundary on the a=0 line sits near q = 0.908") {
  const double T = std::numbers::pi;
  double lo = 0.85, hi = 0.95;
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    const FloquetResult fr =
        floquet_stability(coupling_from_mathieu(0.0, mid, 2.0), T);
    (fr.stable ? lo : hi) = mid;
  }
  const double q_star = 0.5 * (lo + hi);
  CHECK(q_star >= 0.90);
  CHECK(q_star <= 0.92);
}

TEST_CASE("wronskian drift stays within 1e-9 on the driven stable config") {
  const TrapConfig cfg = trap_from_mathieu(0.02, 0.3, 2.0);
  const CouplingFn g = radial_coupling(cfg);
  const auto ic = default_ic(g, 0.0);
  const ModeSolution m = integrate_mode(g, ic.first, ic.second, 0.0,
                                        10.0 * drive_period(cfg), 4001);
  CHECK(m.wronskian_drift <= 1e-9);
  for (double p : m.phi) CHECK(p > 0.0);
  // unwrapping continuity: no sample-to-sample jump reaches pi
  double max_jump = 0.0;
  for (std::size_t i = 1; i < m.theta.size(); ++i)
    max_jump = std::max(max_jump, std::abs(m.theta[i] - m.theta[i - 1]));
  CHECK(max_jump < std::numbers::pi);
}

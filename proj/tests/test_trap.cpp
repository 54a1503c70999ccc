#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "paultrap/errors.hpp"
#include "paultrap/trap.hpp"

using namespace paultrap;

namespace {
TrapConfig make(double e, double r0, double vdc, double vac, double omega,
                double t0 = 0.0) {
  TrapConfig c;
  c.e = e;
  c.r0 = r0;
  c.vdc = vdc;
  c.vac = vac;
  c.omega = omega;
  c.t0 = t0;
  return c;
}
}  // namespace

TEST_CASE("drive voltage pinned values") {
  CHECK(drive_voltage(make(1, 1, 1, 0, 1), 17.3) == 1.0);
  CHECK(drive_voltage(make(1, 1, 0, 1, 2 * std::numbers::pi), 0.0) ==
        doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(drive_voltage(make(1, 1, 2, 1, 2 * std::numbers::pi), 0.25) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("coupling pinned values and ratio") {
  const Couplings c = coupling(make(1, 1, 1, 0, 1), 3.0);
  CHECK(c.g == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.g3 == doctest::Approx(-1.0).epsilon(1e-15));

  const Couplings c2 = coupling(make(2, 2, 2, 0, 1), -1.0);
  CHECK(c2.g == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c2.g3 == doctest::Approx(-1.0).epsilon(1e-15));

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::uniform_real_distribution<double> t(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const TrapConfig cfg = make(u(rng), u(rng), u(rng) - 2.5, u(rng), u(rng));
    const Couplings cc = coupling(cfg, t(rng));
    CHECK(cc.g3 == doctest::Approx(-2.0 * cc.g).epsilon(1e-14));
  }
}

TEST_CASE("coupling periodicity in the drive period") {
  const TrapConfig cfg = make(1.3, 0.8, 0.2, 1.7, 3.1, 0.4);
  const double T = drive_period(cfg);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> t(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double ti = t(rng);
    CHECK(std::abs(coupling(cfg, ti).g - coupling(cfg, ti + T).g) <= 1e-12);
  }
}

TEST_CASE("mathieu parameters: pinned reductions") {
  const MathieuParams z = mathieu_params(make(1, 1, 0, 0, 1));
  CHECK(z.a_r == 0.0);
  CHECK(z.q_r == 0.0);
  CHECK(z.a_z == 0.0);
  CHECK(z.q_z == 0.0);

  const MathieuParams p = mathieu_params(make(1, 1, 1, 1, 2));
  CHECK(p.a_r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.q_r == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.a_z == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(p.q_z == doctest::Approx(-1.0).epsilon(1e-15));

  const MathieuParams q = mathieu_params(make(1, 1, 0, 2, 2));
  CHECK(q.a_r == 0.0);
  CHECK(q.q_r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.q_z == doctest::Approx(-2.0).epsilon(1e-15));

  CHECK_THROWS_AS(mathieu_params(make(1, 1, 0, 0, 0)), ConfigError);
  CHECK_THROWS_AS(mathieu_params(make(1, 1, 0, 0, -2)), ConfigError);
}

TEST_CASE("mathieu reduction matches direct integration of the drive") {
  // x'' + 2 g(t) x = 0 against x'' + (a - 2 q cos 2 tau) x = 0 under
  // tau = omega (t - t0)/2, both integrated by the test-side RK4.
  const TrapConfig cfg = make(1.0, 1.0, 0.02, 0.6, 2.0, 0.3);
  const MathieuParams mp = mathieu_params(cfg);
  const double t0 = cfg.t0;
  const double t1 = t0 + 3.0 * drive_period(cfg);

  const auto w_t = [&](double t) { return 2.0 * coupling(cfg, t).g; };
  const auto w_tau = [&](double tau) {
    return mp.a_r - 2.0 * mp.q_r * std::cos(2.0 * tau);
  };

  for (double frac : {0.25, 0.5, 1.0}) {
    const double tf = t0 + frac * (t1 - t0);
    const auto direct = oracle::rk4_second_order(w_t, 1.0, 0.0, t0, tf, 40000);
    const double tauf = cfg.omega * (tf - t0) / 2.0;
    const auto scaled = oracle::rk4_second_order(w_tau, 1.0, 0.0, 0.0, tauf, 40000);
    CHECK(std::abs(direct[0] - scaled[0]) <= 1e-8);
  }
}

TEST_CASE("mathieu parameters invariant under t0 shifts") {
  const MathieuParams a = mathieu_params(make(1.5, 0.9, 0.3, 1.1, 2.7, 0.0));
  const MathieuParams b = mathieu_params(make(1.5, 0.9, 0.3, 1.1, 2.7, 42.0));
  CHECK(a.a_r == b.a_r);
  CHECK(a.q_r == b.q_r);
  CHECK(a.a_z == b.a_z);
  CHECK(a.q_z == b.q_z);
}

TEST_CASE("trap_from_mathieu round trip and coupling_from_mathieu") {
  const TrapConfig cfg = trap_from_mathieu(0.07, 0.45, 2.5, 1.3, 0.8, 0.1);
  const MathieuParams mp = mathieu_params(cfg);
  CHECK(mp.a_r == doctest::Approx(0.07).epsilon(1e-14));
  CHECK(mp.q_r == doctest::Approx(0.45).epsilon(1e-14));

  const auto g = coupling_from_mathieu(0.07, 0.45, 2.5, 0.1);
  for (double t : {-1.0, 0.0, 0.7, 3.3}) {
    CHECK(g(t) == doctest::Approx(coupling(cfg, t).g).epsilon(1e-13));
  }
}

TEST_CASE("trap config JSON loading") {
  const auto full = nlohmann::json::parse(
      R"({"e":1.5,"r0":0.9,"vdc":0.2,"vac":1.1,"omega":2.7,"t0":0.4})");
  const TrapConfig cfg = trap_from_json(full);
  CHECK(cfg.e == 1.5);
  CHECK(cfg.t0 == 0.4);

  const TrapConfig no_t0 = trap_from_json(nlohmann::json::parse(
      R"({"e":1,"r0":1,"vdc":0,"vac":0,"omega":1})"));
  CHECK(no_t0.t0 == 0.0);

  CHECK_THROWS_AS(trap_from_json(nlohmann::json::parse(
                      R"({"e":1,"r0":1,"vdc":0,"vac":0})")),
                  ConfigError);  // missing omega
  CHECK_THROWS_AS(trap_from_json(nlohmann::json::parse(
                      R"({"e":1,"r0":1,"vdc":0,"vac":0,"omega":1,"x":2})")),
                  ConfigError);  // unknown key
  CHECK_THROWS_AS(trap_from_json(nlohmann::json::parse(
                      R"({"e":1,"r0":"one","vdc":0,"vac":0,"omega":1})")),
                  ConfigError);  // non-number
  CHECK_THROWS_AS(trap_from_json(nlohmann::json::parse(
                      R"({"e":1,"r0":-1,"vdc":0,"vac":0,"omega":1})")),
                  ConfigError);  // r0 <= 0
  CHECK_THROWS_AS(trap_from_json(nlohmann::json::parse(
                      R"({"e":1,"r0":1,"vdc":0,"vac":-0.5,"omega":1})")),
                  ConfigError);  // vac < 0
  CHECK_THROWS_AS(trap_from_json_string("not json"), ConfigError);
}

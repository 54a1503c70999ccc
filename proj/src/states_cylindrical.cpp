#include "paultrap/states_cylindrical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "paultrap/errors.hpp"
#include "paultrap/special.hpp"
#include "paultrap/states_cartesian.hpp"

namespace paultrap {

CylindricalQN polar_to_cyl(const PolarQN& qn) {
  if (qn.n < 0 || qn.m < 0)
    throw std::invalid_argument("polar_to_cyl: n and m must be >= 0");
  return {qn.n + qn.m, qn.m - qn.n};
}

PolarQN cyl_to_polar(const CylindricalQN& qn) {
  const int l = qn.l();
  if (qn.n_r < 0 || l > qn.n_r || (qn.n_r - l) % 2 != 0)
    throw SelectionRuleError("selection rule: n_r and l_z parity");
  return {(qn.n_r - qn.l_z) / 2, (qn.n_r + qn.l_z) / 2};
}

Complex omega_state_at(const ModePoint& mp, const PolarQN& qn, double r,
                       double theta) {
  if (qn.n < 0 || qn.m < 0)
    throw std::invalid_argument("omega_state: n and m must be >= 0");
  if (r < 0.0) throw std::invalid_argument("omega_state: r must be >= 0");
  const int k = std::min(qn.n, qn.m);
  const int alpha = std::abs(qn.n - qn.m);
  const double rho = r / std::sqrt(mp.phi);
  const double rho2 = rho * rho;

  double log_mag = log_factorial(k) -
                   0.5 * (log_factorial(qn.n) + log_factorial(qn.m)) +
                   0.5 * std::log(2.0 / mp.phi) -
                   0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * rho2;
  double mag = std::exp(log_mag) * std::pow(rho, alpha) *
               glaguerre(k, alpha, rho2);
  if (k % 2 != 0) mag = -mag;
  const double phase = (qn.m - qn.n) * theta - (qn.n + qn.m + 1) * mp.theta +
                       0.25 * rho2 * mp.phi_dot;
  return mag * Complex(std::cos(phase), std::sin(phase));
}

Complex omega_state(const ModeSolution& radial, const PolarQN& qn, double r,
                    double theta, double t) {
  return omega_state_at(mode_at(radial, t), qn, r, theta);
}

Complex radial_state_at(const ModePoint& mp, const CylindricalQN& qn,
                        double r) {
  cyl_to_polar(qn);  // enforce the selection rule
  if (r < 0.0) throw std::invalid_argument("radial_state: r must be >= 0");
  const int l = qn.l();
  const int k = qn.k();                // (n_r - l)/2
  const int kmax = (qn.n_r + l) / 2;
  const double rho = r / std::sqrt(mp.phi);
  const double rho2 = rho * rho;

  const double log_mag =
      0.5 * (std::numbers::ln2 + log_factorial(k) - std::log(mp.phi) -
             log_factorial(kmax)) -
      0.5 * rho2;
  double mag = std::exp(log_mag) * std::pow(rho, l) * glaguerre(k, l, rho2);
  if (k % 2 != 0) mag = -mag;
  const double phase =
      -(qn.n_r + 1) * mp.theta + 0.25 * rho2 * mp.phi_dot;
  return mag * Complex(std::cos(phase), std::sin(phase));
}

Complex radial_state(const ModeSolution& radial, const CylindricalQN& qn,
                     double r, double t) {
  return radial_state_at(mode_at(radial, t), qn, r);
}

Complex theta_state(int l_z, double theta) {
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return norm * Complex(std::cos(l_z * theta), std::sin(l_z * theta));
}

Complex phi_cylindrical(const ModeSolution& radial, const ModeSolution& axial,
                        const CylindricalQN& qn, int n_z, double r,
                        double theta, double z, double t) {
  return radial_state(radial, qn, r, t) * theta_state(qn.l_z, theta) *
         z_state(axial, n_z, z, t);
}

LevelInfo level_degeneracy(int N) {
  if (N < 0) throw std::invalid_argument("level_degeneracy: N must be >= 0");
  LevelInfo info;
  info.count = N + 1;
  info.states.reserve(info.count);
  for (int lz = -N; lz <= N; lz += 2) info.states.push_back({N, lz});
  return info;
}

}  // namespace paultrap

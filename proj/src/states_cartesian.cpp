#include "paultrap/states_cartesian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "paultrap/special.hpp"

namespace paultrap {

ScaledCoords scale_coords(const ModeSolution& radial, const ModeSolution& axial,
                          double x, double y, double z, double t) {
  const ModePoint mr = mode_at(radial, t);
  const ModePoint mz = mode_at(axial, t);
  const double sr = std::sqrt(mr.phi);
  return {x / sr, y / sr, z / std::sqrt(mz.phi), t};
}

Complex number_state_1d(const ModePoint& mp, int n, double coord, int n_max) {
  if (n < 0) throw std::invalid_argument("number_state_1d: n must be >= 0");
  if (n > n_max)
    throw std::invalid_argument("number_state_1d: n beyond overflow-safe bound");
  const double s = coord / std::sqrt(mp.phi);
  const double log_norm = -0.5 * (n * std::numbers::ln2 + log_factorial(n)) -
                          0.25 * std::log(std::numbers::pi * mp.phi);
  const double mag = std::exp(log_norm - 0.5 * s * s) * hermite(n, s);
  const double phase = 0.25 * s * s * mp.phi_dot - (n + 0.5) * mp.theta;
  return mag * Complex(std::cos(phase), std::sin(phase));
}

Complex z_extremal(const ModeSolution& axial, double z, double t) {
  return number_state_1d(mode_at(axial, t), 0, z);
}

Complex z_state(const ModeSolution& axial, int n, double z, double t,
                int n_max) {
  return number_state_1d(mode_at(axial, t), n, z, n_max);
}

Complex xy_state(const ModeSolution& radial, int n, double coord, double t,
                 int n_max) {
  return number_state_1d(mode_at(radial, t), n, coord, n_max);
}

Complex psi_cartesian(const ModeSolution& radial, const ModeSolution& axial,
                      const CartesianQN& qn, double x, double y, double z,
                      double t) {
  const ModePoint mr = mode_at(radial, t);
  const ModePoint mz = mode_at(axial, t);
  return number_state_1d(mr, qn.nx, x) * number_state_1d(mr, qn.ny, y) *
         number_state_1d(mz, qn.nz, z);
}

}  // namespace paultrap

#ifndef PAULTRAP_STATES_CARTESIAN_HPP
#define PAULTRAP_STATES_CARTESIAN_HPP

#include "paultrap/mode.hpp"

namespace paultrap {

inline constexpr int kDefaultNMax = 60;

struct CartesianQN {
  int nx = 0;
  int ny = 0;
  int nz = 0;
};

// Dimensionless separable coordinates sx = x/sqrt(phi), sy = y/sqrt(phi),
// sz = z/sqrt(phi3) with phi from the radial mode and phi3 from the axial.
struct ScaledCoords {
  double sx;
  double sy;
  double sz;
  double st;
};

ScaledCoords scale_coords(const ModeSolution& radial, const ModeSolution& axial,
                          double x, double y, double z, double t);

// One-dimensional number state evaluated against mode data at a fixed time:
//   (2^n n!)^(-1/2) (pi phi)^(-1/4) e^{-i(n+1/2) theta}
//     H_n(s) exp{-(s^2/2)[1 - i phi_dot/2]},  s = coord/sqrt(phi).
// Normalization is accumulated in the log domain; n is capped by n_max.
Complex number_state_1d(const ModePoint& mp, int n, double coord,
                        int n_max = kDefaultNMax);

// Extremal (n = 0) axial state; the e^{-i theta/2} factor generalizes the
// harmonic-oscillator ground-state energy phase.
Complex z_extremal(const ModeSolution& axial, double z, double t);

Complex z_state(const ModeSolution& axial, int n, double z, double t,
                int n_max = kDefaultNMax);

// Same formula with the radial mode substituted; serves both x and y.
Complex xy_state(const ModeSolution& radial, int n, double coord, double t,
                 int n_max = kDefaultNMax);

// Product X_{nx}(x,t) Y_{ny}(y,t) Z_{nz}(z,t).
Complex psi_cartesian(const ModeSolution& radial, const ModeSolution& axial,
                      const CartesianQN& qn, double x, double y, double z,
                      double t);

}  // namespace paultrap

#endif

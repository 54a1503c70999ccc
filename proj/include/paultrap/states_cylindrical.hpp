#ifndef PAULTRAP_STATES_CYLINDRICAL_HPP
#define PAULTRAP_STATES_CYLINDRICAL_HPP

#include <vector>

#include "paultrap/mode.hpp"

namespace paultrap {

// Oscillator-subalgebra labels: n counts a+ quanta, m counts c+ quanta.
struct PolarQN {
  int n = 0;
  int m = 0;
};

// Standard cylindrical labels n_r = n+m, l_z = m-n. The parity selection
// rule n_r - |l_z| even (the 45-degree rotation of the (n,m) lattice) is
// enforced on conversion back to (n,m).
struct CylindricalQN {
  int n_r = 0;
  int l_z = 0;

  int l() const { return l_z < 0 ? -l_z : l_z; }
  int k() const { return (n_r - l()) / 2; }
};

CylindricalQN polar_to_cyl(const PolarQN& qn);

// Throws SelectionRuleError when n_r - |l_z| is odd or negative.
PolarQN cyl_to_polar(const CylindricalQN& qn);

// Omega_{n,m}(r,theta,t):
//   (2 pi)^(-1/2) e^{i(m-n)theta} (-1)^k k! (n! m!)^(-1/2) (2/phi)^(1/2)
//     e^{-i(n+m+1) theta_xi} rho^{|n-m|} L_k^{(|n-m|)}(rho^2)
//     exp{-(rho^2/2)[1 - i phi_dot/2]},  rho = r/sqrt(phi), k = min(n, m).
Complex omega_state(const ModeSolution& radial, const PolarQN& qn, double r,
                    double theta, double t);
Complex omega_state_at(const ModePoint& mp, const PolarQN& qn, double r,
                       double theta);

// Radial factor R_{n_r,l}(r,t) of the cylindrical relabeling; equals
// sqrt(2 pi) Omega_{n,m} with the angular factor removed.
Complex radial_state(const ModeSolution& radial, const CylindricalQN& qn,
                     double r, double t);
Complex radial_state_at(const ModePoint& mp, const CylindricalQN& qn, double r);

// Theta_{l_z}(theta) = e^{i l_z theta} / sqrt(2 pi).
Complex theta_state(int l_z, double theta);

// Full product Phi = R_{n_r,l} Theta_{l_z} Z_{n_z}.
Complex phi_cylindrical(const ModeSolution& radial, const ModeSolution& axial,
                        const CylindricalQN& qn, int n_z, double r,
                        double theta, double z, double t);

// All states on level K = N + 1, i.e. the (n, m) pairs with n + m = N,
// listed as (n_r, l_z) in ascending l_z. count == N + 1.
struct LevelInfo {
  int count = 0;
  std::vector<CylindricalQN> states;
};
LevelInfo level_degeneracy(int N);

}  // namespace paultrap

#endif

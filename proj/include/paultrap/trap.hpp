#ifndef PAULTRAP_TRAP_HPP
#define PAULTRAP_TRAP_HPP

#include <functional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace paultrap {

// Drive parameters of the three-dimensional Paul trap (hbar = m = 1).
// The electric potential V(t) = vdc - vac*cos(omega*(t - t0)) is applied
// between the ring and the end caps; the quadrupole geometry turns it into
// the couplings g(t) (radial) and g3(t) = -2 g(t) (axial).
struct TrapConfig {
  double e = 1.0;      // particle charge
  double r0 = 1.0;     // characteristic trap radius
  double vdc = 0.0;    // dc voltage
  double vac = 0.0;    // ac amplitude
  double omega = 1.0;  // drive angular frequency
  double t0 = 0.0;     // drive phase reference

  // Throws ConfigError unless r0 > 0, omega > 0, vac >= 0 and all finite.
  void validate() const;
};

struct Couplings {
  double g;   // radial:  V_x = g x^2, V_y = g y^2
  double g3;  // axial:   V_z = g3 z^2, always -2 g
};

// Dimensionless Mathieu parameters of x'' + (a - 2q cos 2*tau) x = 0
// under tau = omega*(t - t0)/2. Axial values are -2x the radial ones.
struct MathieuParams {
  double a_r;
  double q_r;
  double a_z;
  double q_z;
};

double drive_voltage(const TrapConfig& cfg, double t);
Couplings coupling(const TrapConfig& cfg, double t);
MathieuParams mathieu_params(const TrapConfig& cfg);

// t -> g(t) and t -> g3(t) closures over a copy of cfg.
std::function<double(double)> radial_coupling(const TrapConfig& cfg);
std::function<double(double)> axial_coupling(const TrapConfig& cfg);

// One drive period 2*pi/omega.
double drive_period(const TrapConfig& cfg);

// Inverse of mathieu_params on the radial pair: picks vdc, vac realizing
// (a_r, q_r) for the given e, r0, omega.
TrapConfig trap_from_mathieu(double a_r, double q_r, double omega,
                             double e = 1.0, double r0 = 1.0, double t0 = 0.0);

// g(t) realizing Mathieu (a, q) at drive frequency omega directly; admits
// q < 0, unlike TrapConfig whose vac must be non-negative.
std::function<double(double)> coupling_from_mathieu(double a, double q,
                                                    double omega,
                                                    double t0 = 0.0);

// Parses {"e","r0","vdc","vac","omega","t0"}; t0 defaults to 0; all values
// must be finite numbers; unknown keys are rejected.
TrapConfig trap_from_json(const nlohmann::json& j);
TrapConfig trap_from_json_string(const std::string& text);

}  // namespace paultrap

#endif

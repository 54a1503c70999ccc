#ifndef PAULTRAP_MODE_HPP
#define PAULTRAP_MODE_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "paultrap/trap.hpp"

namespace paultrap {

using Complex = std::complex<double>;
using CouplingFn = std::function<double(double)>;

enum class Axis { radial, axial };

// Complex mode function xi(t) of gamma'' + 2 g(t) gamma = 0 sampled on an
// ordered time grid, normalized so W = xi*conj(xi_dot) - xi_dot*conj(xi) = -i.
// phi = 2 |xi|^2 is the squared width scale, theta the unwrapped phase of xi.
struct ModeSolution {
  Axis axis = Axis::radial;
  std::vector<double> t;
  std::vector<Complex> xi;
  std::vector<Complex> xi_dot;
  std::vector<double> g;  // coupling at samples; gives xi_ddot = -2 g xi
  std::vector<double> phi;
  std::vector<double> phi_dot;
  std::vector<double> theta;
  double wronskian_drift = 0.0;  // max |W(t) + i| over samples

  double t_start() const { return t.front(); }
  double t_end() const { return t.back(); }
  bool in_span(double time) const;
};

// Mode data at one instant, the per-time-slice input of every state formula.
struct ModePoint {
  Complex xi;
  Complex xi_dot;
  double phi;
  double phi_dot;
  double theta;
};

struct IntegrateOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double wronskian_tol = 1e-9;  // max admissible |W + i| drift
};

// Closed-form reference mode xi = (2w)^(-1/2) e^{i w t} for constant
// coupling g = w^2/2: phi = 1/w, phi_dot = 0, W = -i exactly.
ModeSolution sho_mode(double omega_ref, std::vector<double> times);

// (2w~)^(-1/2), i w~ xi0 with w~ = sqrt(2 g(t_start)) when g(t_start) > 0,
// else w~ = 1. Satisfies W = -i by construction.
std::pair<Complex, Complex> default_ic(const CouplingFn& coupling,
                                       double t_start);

// Raw trajectory of gamma'' + 2 g(t) gamma = 0; no Wronskian handling.
struct RawTrajectory {
  std::vector<double> t;
  std::vector<Complex> y;
  std::vector<Complex> ydot;
};
RawTrajectory solve_mode_equation(const CouplingFn& coupling, Complex y0,
                                  Complex ydot0, double t_start, double t_end,
                                  std::size_t samples, double rel_tol = 1e-12,
                                  double abs_tol = 1e-12);

// Adaptive integration of the mode equation with `samples` uniformly spaced
// sample points (endpoints included). Rejects initial conditions whose
// Wronskian is not -i within 1e-12; throws NumericsError when the drift
// exceeds options.wronskian_tol or the solution overflows.
ModeSolution integrate_mode(const CouplingFn& coupling, Complex xi0,
                            Complex xi_dot0, double t_start, double t_end,
                            std::size_t samples, Axis axis = Axis::radial,
                            const IntegrateOptions& options = {});

// Cubic-Hermite interpolation between samples (xi from xi/xi_dot knots,
// xi_dot from xi_dot/xi_ddot knots with xi_ddot = -2 g xi); phi, phi_dot,
// theta recomputed from the interpolants. Throws std::out_of_range outside
// the span; reproduces stored values exactly at sample points.
ModePoint mode_at(const ModeSolution& mode, double t);

struct FloquetResult {
  Complex multiplier1;
  Complex multiplier2;
  double trace;     // of the one-period monodromy matrix
  double det;       // Wronskian check, 1 within 1e-9
  bool stable;      // |trace| < 2
  bool marginal;    // |trace| == 2 within tolerance; reported unstable
};

// Monodromy of gamma'' + 2 g(t) gamma = 0 over one period from the two
// fundamental solutions (1,0) and (0,1). Multipliers solve
// lambda^2 - trace*lambda + 1 = 0.
FloquetResult floquet_stability(const CouplingFn& coupling, double period,
                                double rel_tol = 1e-12);

struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

// Stability classification over a (a_r, q_r) sweep; cell (i, j) of the
// row-major arrays belongs to (p1[i], p2[j]).
struct StabilityChart {
  std::vector<double> p1;  // a_r values
  std::vector<double> p2;  // q_r values
  std::vector<double> trace_r;
  std::vector<double> trace_z;
  std::vector<std::uint8_t> stable_r;
  std::vector<std::uint8_t> stable_z;
  std::vector<std::uint8_t> stable_trap;  // stable_r && stable_z

  std::size_t index(std::size_t i, std::size_t j) const {
    return i * p2.size() + j;
  }
};

// Per-cell Floquet classification of both axes over one drive period of the
// template trap (e, r0, omega, t0 taken from `tmpl`; voltages realized per
// cell from the swept Mathieu parameters). Cells are evaluated in parallel.
StabilityChart stability_scan(const TrapConfig& tmpl, const SweepRange& a_range,
                              const SweepRange& q_range);

}  // namespace paultrap

#endif

#ifndef PAULTRAP_VERIFY_HPP
#define PAULTRAP_VERIFY_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "paultrap/mode.hpp"
#include "paultrap/states_cylindrical.hpp"

namespace paultrap {

struct AxisGrid {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  double h() const { return (max - min) / static_cast<double>(count - 1); }
  double at(std::size_t i) const { return min + h() * static_cast<double>(i); }
};

// Spatial axes, time slices, and the symmetric offset used for the
// Richardson-refined time derivative. Counts must allow a 4th-order
// interior (>= 9 points per axis).
struct GridSpec {
  std::vector<AxisGrid> axes;
  std::vector<double> times;
  double dt_probe = 1e-5;

  void validate(std::size_t expected_axes) const;
};

struct ResidualReport {
  std::string check;
  std::string params;
  double max_abs = 0.0;
  double rms = 0.0;
  std::size_t interior_points = 0;
  double tol = 0.0;
  bool pass = false;
};

// Ladder/commutator/eigen results. max_abs is the measure-weighted L2 grid
// norm of the defect (for eigen checks: the eigenvalue deviation), rms the
// pointwise rms.
struct CheckReport {
  std::string check;
  std::string params;
  double max_abs = 0.0;
  double rms = 0.0;
  double tol = 0.0;
  bool pass = false;
};

using Sampler1D = std::function<Complex(double, double)>;               // (z, t)
using Sampler3D = std::function<Complex(double, double, double, double)>;  // (x,y,z,t)
using SamplerPolar = std::function<Complex(double, double, double)>;    // (r,theta,t)

// Applies d_zz (4th-order central) + 2i d_t (Richardson-refined central)
// - 2 g(t) z^2 on the stencil-valid interior; pass iff max_abs <= tol.
ResidualReport schrodinger_residual_1d(const Sampler1D& state,
                                       const CouplingFn& coupling,
                                       const GridSpec& grid, double tol,
                                       const std::string& label = "residual_1d");

ResidualReport schrodinger_residual_3d_cartesian(
    const Sampler3D& state, const CouplingFn& g, const CouplingFn& g3,
    const GridSpec& grid, double tol,
    const std::string& label = "residual_3d_cartesian");

// d_rr + (1/r) d_r + (1/r^2) d_thth + 2i d_t - 2 g r^2 with periodic
// theta stencils; the radial grid must start at >= 4h (axis guard).
// axes[1] is periodic: spacing (max - min)/count, endpoint excluded.
ResidualReport schrodinger_residual_polar(
    const SamplerPolar& state, const CouplingFn& g, const GridSpec& grid,
    double tol, const std::string& label = "residual_polar");

// J_- = xi d_z - i xi_dot z and J_+ = -conj(xi) d_z + i conj(xi_dot) z
// applied by 4th-order differences: || J_- Z_n - sqrt(n) Z_{n-1} || and
// || J_+ Z_n - sqrt(n+1) Z_{n+1} ||. For n = 0 the lowering target is 0.
std::vector<CheckReport> ladder_check_z(const ModeSolution& axial, int n,
                                        const GridSpec& grid, double tol);

// (J_- J_+ - J_+ J_-) f = f on a caller-supplied test function.
CheckReport commutator_check(const ModeSolution& axial, const Sampler1D& f,
                             const GridSpec& grid, double tol,
                             const std::string& fn_label);

// a_+-, c_+- built from the complex combinations of J_x+-, J_y+- on an
// (x, y) grid (Omega sampled via r = hypot, theta = atan2):
// lowering/raising actions with sqrt factors, extremal zeros at (0,0).
std::vector<CheckReport> polar_ladder_check(const ModeSolution& radial,
                                            const PolarQN& qn,
                                            const GridSpec& grid, double tol);

// L_z = i(y d_x - x d_y) directly; N_a = a_+ a_-, N_c = c_+ c_- by
// composition; K = N_a + N_c + 1, f = (K - L_z)/2, d = (K + L_z)/2.
// Eigenvalues are Rayleigh quotients; reported max_abs is the deviation
// from (m-n), (n+m+1), (n+1/2), (m+1/2) and the -1/2 Casimir values.
std::vector<CheckReport> eigen_check(const ModeSolution& radial,
                                     const PolarQN& qn, const GridSpec& grid,
                                     double tol);

enum class Measure { cartesian, cylindrical };

// Quadrature norm at each time slice: |norm - 1| <= tol and max variation
// across slices <= tol. Throws NumericsError when the boundary-shell mass
// exceeds tol/10 (grid does not cover the state). Cylindrical measure
// takes (r, theta, z) axes with theta periodic as in the polar residual
// and weight r dr dtheta dz.
CheckReport norm_conservation_1d(const Sampler1D& state, const GridSpec& grid,
                                 double tol, const std::string& label);
CheckReport norm_conservation_3d(const Sampler3D& state, Measure measure,
                                 const GridSpec& grid, double tol,
                                 const std::string& label);

nlohmann::json residual_to_json(const ResidualReport& r);
nlohmann::json check_to_json(const CheckReport& r);

}  // namespace paultrap

#endif

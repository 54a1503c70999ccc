#include "paultrap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "paultrap/errors.hpp"
#include "paultrap/parallel.hpp"
#include "paultrap/states_cartesian.hpp"

namespace paultrap {

namespace {

constexpr Complex kI(0.0, 1.0);

using Field = std::vector<Complex>;
using FillFn = std::function<void(double, Field&)>;

// Richardson-refined symmetric time derivative:
// dpsi = [8 (psi(t+dt/2) - psi(t-dt/2)) - (psi(t+dt) - psi(t-dt))] / (6 dt).
void eval_with_dt(const FillFn& fill, double t, double dt, Field& psi,
                  Field& dpsi) {
  fill(t, psi);
  dpsi.assign(psi.size(), Complex(0.0, 0.0));
  Field tmp(psi.size());
  const struct {
    double off;
    double coef;
  } probes[4] = {{dt, -1.0}, {-dt, 1.0}, {0.5 * dt, 8.0}, {-0.5 * dt, -8.0}};
  for (const auto& p : probes) {
    fill(t + p.off, tmp);
    const double c = p.coef / (6.0 * dt);
    for (std::size_t i = 0; i < psi.size(); ++i) dpsi[i] += c * tmp[i];
  }
}

std::string grid_summary(const GridSpec& grid) {
  std::string out;
  char buf[64];
  for (std::size_t a = 0; a < grid.axes.size(); ++a) {
    const AxisGrid& ax = grid.axes[a];
    std::snprintf(buf, sizeof(buf), "%s[%g:%g]x%zu", a ? "," : "", ax.min,
                  ax.max, ax.count);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), ",t_slices=%zu", grid.times.size());
  out += buf;
  return out;
}

struct ResidualStats {
  double max_abs = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(Complex r) {
    const double a = std::abs(r);
    max_abs = std::max(max_abs, a);
    sum_sq += a * a;
    ++count;
  }
  double rms() const { return count ? std::sqrt(sum_sq / count) : 0.0; }
};

// Defect accumulated in the measure-weighted discrete L2 norm.
struct DefectStats {
  double max_norm = 0.0;  // max over time slices of sqrt(sum |d|^2 w)
  double max_abs = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add_slice(double norm_sq) {
    max_norm = std::max(max_norm, std::sqrt(norm_sq));
  }
  void add_point(Complex d) {
    const double a = std::abs(d);
    max_abs = std::max(max_abs, a);
    sum_sq += a * a;
    ++count;
  }
  double rms() const { return count ? std::sqrt(sum_sq / count) : 0.0; }
};

}  // namespace

void GridSpec::validate(std::size_t expected_axes) const {
  if (axes.size() != expected_axes)
    throw std::invalid_argument("grid: wrong number of axes");
  for (const AxisGrid& ax : axes) {
    if (ax.count < 9)
      throw std::invalid_argument("grid: need >= 9 points per axis");
    if (!(ax.max > ax.min)) throw std::invalid_argument("grid: max must exceed min");
  }
  if (times.empty()) throw std::invalid_argument("grid: no time slices");
  if (!(dt_probe > 0.0)) throw std::invalid_argument("grid: dt_probe must be > 0");
}

ResidualReport schrodinger_residual_1d(const Sampler1D& state,
                                       const CouplingFn& coupling,
                                       const GridSpec& grid, double tol,
                                       const std::string& label) {
  grid.validate(1);
  const AxisGrid& gz = grid.axes[0];
  const std::size_t n = gz.count;
  const double h = gz.h();
  const double inv12h2 = 1.0 / (12.0 * h * h);

  ResidualStats stats;
  Field psi, dpsi;
  for (double t : grid.times) {
    const FillFn fill = [&](double tt, Field& out) {
      out.resize(n);
      parallel_for(n, [&](std::size_t b, std::size_t e) {
        const Sampler1D local = state;  // per-worker copy: samplers may memoize
        for (std::size_t i = b; i < e; ++i) out[i] = local(gz.at(i), tt);
      });
    };
    eval_with_dt(fill, t, grid.dt_probe, psi, dpsi);
    const double g = coupling(t);
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const double z = gz.at(i);
      const Complex d2 = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] +
                          16.0 * psi[i + 1] - psi[i + 2]) *
                         inv12h2;
      stats.add(d2 + 2.0 * kI * dpsi[i] - 2.0 * g * z * z * psi[i]);
    }
  }
  return {label, grid_summary(grid), stats.max_abs, stats.rms(), stats.count,
          tol, stats.max_abs <= tol};
}

ResidualReport schrodinger_residual_3d_cartesian(
    const Sampler3D& state, const CouplingFn& g, const CouplingFn& g3,
    const GridSpec& grid, double tol, const std::string& label) {
  grid.validate(3);
  const AxisGrid& gx = grid.axes[0];
  const AxisGrid& gy = grid.axes[1];
  const AxisGrid& gz = grid.axes[2];
  const std::size_t nx = gx.count, ny = gy.count, nz = gz.count;
  const std::size_t total = nx * ny * nz;
  const double cx = 1.0 / (12.0 * gx.h() * gx.h());
  const double cy = 1.0 / (12.0 * gy.h() * gy.h());
  const double cz = 1.0 / (12.0 * gz.h() * gz.h());
  const std::size_t sx = ny * nz, sy = nz, sz = 1;

  ResidualStats stats;
  Field psi, dpsi;
  for (double t : grid.times) {
    const FillFn fill = [&](double tt, Field& out) {
      out.resize(total);
      parallel_for(total, [&](std::size_t b, std::size_t e) {
        const Sampler3D local = state;
        for (std::size_t idx = b; idx < e; ++idx) {
          const std::size_t ix = idx / sx;
          const std::size_t iy = (idx / nz) % ny;
          const std::size_t iz = idx % nz;
          out[idx] = local(gx.at(ix), gy.at(iy), gz.at(iz), tt);
        }
      });
    };
    eval_with_dt(fill, t, grid.dt_probe, psi, dpsi);
    const double gv = g(t);
    const double g3v = g3(t);
    for (std::size_t ix = 2; ix + 2 < nx; ++ix) {
      const double x = gx.at(ix);
      for (std::size_t iy = 2; iy + 2 < ny; ++iy) {
        const double y = gy.at(iy);
        for (std::size_t iz = 2; iz + 2 < nz; ++iz) {
          const double z = gz.at(iz);
          const std::size_t i = ix * sx + iy * sy + iz;
          const Complex lap =
              (-psi[i - 2 * sx] + 16.0 * psi[i - sx] - 30.0 * psi[i] +
               16.0 * psi[i + sx] - psi[i + 2 * sx]) *
                  cx +
              (-psi[i - 2 * sy] + 16.0 * psi[i - sy] - 30.0 * psi[i] +
               16.0 * psi[i + sy] - psi[i + 2 * sy]) *
                  cy +
              (-psi[i - 2 * sz] + 16.0 * psi[i - sz] - 30.0 * psi[i] +
               16.0 * psi[i + sz] - psi[i + 2 * sz]) *
                  cz;
          const double pot = 2.0 * gv * (x * x + y * y) + 2.0 * g3v * z * z;
          stats.add(lap + 2.0 * kI * dpsi[i] - pot * psi[i]);
        }
      }
    }
  }
  return {label, grid_summary(grid), stats.max_abs, stats.rms(), stats.count,
          tol, stats.max_abs <= tol};
}

ResidualReport schrodinger_residual_polar(const SamplerPolar& state,
                                          const CouplingFn& g,
                                          const GridSpec& grid, double tol,
                                          const std::string& label) {
  grid.validate(2);
  const AxisGrid& gr = grid.axes[0];
  const AxisGrid& gth = grid.axes[1];  // periodic: h = (max - min)/count
  const std::size_t nr = gr.count, nth = gth.count;
  const double hr = gr.h();
  if (gr.min < 4.0 * hr - 1e-12)
    throw std::invalid_argument("polar grid: r must start at >= 4h (axis guard)");
  const double hth = (gth.max - gth.min) / static_cast<double>(nth);
  const double cr2 = 1.0 / (12.0 * hr * hr);
  const double cr1 = 1.0 / (12.0 * hr);
  const double cth2 = 1.0 / (12.0 * hth * hth);

  ResidualStats stats;
  Field psi, dpsi;
  for (double t : grid.times) {
    const FillFn fill = [&](double tt, Field& out) {
      out.resize(nr * nth);
      parallel_for(nr * nth, [&](std::size_t b, std::size_t e) {
        const SamplerPolar local = state;
        for (std::size_t idx = b; idx < e; ++idx) {
          const std::size_t ir = idx / nth;
          const std::size_t jt = idx % nth;
          out[idx] = local(gr.at(ir), gth.min + hth * jt, tt);
        }
      });
    };
    eval_with_dt(fill, t, grid.dt_probe, psi, dpsi);
    const double gv = g(t);
    for (std::size_t ir = 2; ir + 2 < nr; ++ir) {
      const double r = gr.at(ir);
      for (std::size_t jt = 0; jt < nth; ++jt) {
        const auto at = [&](std::size_t iir, std::ptrdiff_t dj) {
          const std::size_t jj = (jt + nth + dj) % nth;
          return psi[iir * nth + jj];
        };
        const std::size_t i = ir * nth + jt;
        const Complex d2r = (-at(ir - 2, 0) + 16.0 * at(ir - 1, 0) -
                             30.0 * psi[i] + 16.0 * at(ir + 1, 0) -
                             at(ir + 2, 0)) *
                            cr2;
        const Complex d1r = (at(ir - 2, 0) - 8.0 * at(ir - 1, 0) +
                             8.0 * at(ir + 1, 0) - at(ir + 2, 0)) *
                            cr1;
        const Complex d2th = (-at(ir, -2) + 16.0 * at(ir, -1) - 30.0 * psi[i] +
                              16.0 * at(ir, 1) - at(ir, 2)) *
                             cth2;
        stats.add(d2r + d1r / r + d2th / (r * r) + 2.0 * kI * dpsi[i] -
                  2.0 * gv * r * r * psi[i]);
      }
    }
  }
  return {label, grid_summary(grid), stats.max_abs, stats.rms(), stats.count,
          tol, stats.max_abs <= tol};
}

namespace {

// J_- = xi d_z - i xi_dot z, J_+ = -conj(xi) d_z + i conj(xi_dot) z applied
// with the 4th-order first-derivative stencil. Valid margin grows by 2.
Field apply_ladder_1d(const Field& f, bool plus, const ModePoint& mp,
                      const AxisGrid& gz) {
  const std::size_t n = f.size();
  const double c1 = 1.0 / (12.0 * gz.h());
  const Complex cd = plus ? -std::conj(mp.xi) : mp.xi;
  const Complex cz = plus ? kI * std::conj(mp.xi_dot) : -kI * mp.xi_dot;
  Field out(n, Complex(0.0, 0.0));
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Complex d1 =
        (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c1;
    out[i] = cd * d1 + cz * gz.at(i) * f[i];
  }
  return out;
}

Field sample_axis_state(const ModePoint& mp, int n, const AxisGrid& gz) {
  Field f(gz.count);
  for (std::size_t i = 0; i < gz.count; ++i)
    f[i] = number_state_1d(mp, n, gz.at(i));
  return f;
}

}  // namespace

std::vector<CheckReport> ladder_check_z(const ModeSolution& axial, int n,
                                        const GridSpec& grid, double tol) {
  grid.validate(1);
  if (n < 0) throw std::invalid_argument("ladder_check_z: n must be >= 0");
  const AxisGrid& gz = grid.axes[0];
  const double h = gz.h();

  DefectStats lower, raise;
  for (double t : grid.times) {
    const ModePoint mp = mode_at(axial, t);
    const Field zn = sample_axis_state(mp, n, gz);
    const Field lo = apply_ladder_1d(zn, false, mp, gz);
    const Field hi = apply_ladder_1d(zn, true, mp, gz);
    const Field target_lo =
        n >= 1 ? sample_axis_state(mp, n - 1, gz) : Field(gz.count, 0.0);
    const Field target_hi = sample_axis_state(mp, n + 1, gz);
    const double sq_lo = std::sqrt(static_cast<double>(n));
    const double sq_hi = std::sqrt(static_cast<double>(n) + 1.0);
    double acc_lo = 0.0, acc_hi = 0.0;
    for (std::size_t i = 2; i + 2 < gz.count; ++i) {
      const Complex dl = lo[i] - sq_lo * target_lo[i];
      const Complex dh = hi[i] - sq_hi * target_hi[i];
      lower.add_point(dl);
      raise.add_point(dh);
      acc_lo += std::norm(dl) * h;
      acc_hi += std::norm(dh) * h;
    }
    lower.add_slice(acc_lo);
    raise.add_slice(acc_hi);
  }
  const std::string params = "n=" + std::to_string(n);
  return {{"ladder_z_lower", params, lower.max_norm, lower.rms(), tol,
           lower.max_norm <= tol},
          {"ladder_z_raise", params, raise.max_norm, raise.rms(), tol,
           raise.max_norm <= tol}};
}

CheckReport commutator_check(const ModeSolution& axial, const Sampler1D& f,
                             const GridSpec& grid, double tol,
                             const std::string& fn_label) {
  grid.validate(1);
  const AxisGrid& gz = grid.axes[0];
  const double h = gz.h();

  DefectStats stats;
  for (double t : grid.times) {
    const ModePoint mp = mode_at(axial, t);
    Field base(gz.count);
    for (std::size_t i = 0; i < gz.count; ++i) base[i] = f(gz.at(i), t);
    const Field jp = apply_ladder_1d(base, true, mp, gz);
    const Field jm = apply_ladder_1d(base, false, mp, gz);
    const Field jm_jp = apply_ladder_1d(jp, false, mp, gz);
    const Field jp_jm = apply_ladder_1d(jm, true, mp, gz);
    double acc = 0.0;
    for (std::size_t i = 4; i + 4 < gz.count; ++i) {
      const Complex d = jm_jp[i] - jp_jm[i] - base[i];
      stats.add_point(d);
      acc += std::norm(d) * h;
    }
    stats.add_slice(acc);
  }
  return {"commutator_z", fn_label, stats.max_norm, stats.rms(), tol,
          stats.max_norm <= tol};
}

namespace {

enum class PolarOp { a_minus, a_plus, c_minus, c_plus };

// Complex combinations of J_x+- and J_y+- on an (x, y) grid; index ix*ny+iy.
Field apply_ladder_2d(const Field& f, PolarOp op, const ModePoint& mp,
                      const AxisGrid& gx, const AxisGrid& gy) {
  const std::size_t nx = gx.count, ny = gy.count;
  const double cx = 1.0 / (12.0 * gx.h());
  const double cy = 1.0 / (12.0 * gy.h());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Complex cd, cm;     // derivative and multiplier coefficients
  double ysign = 1.0; // sign of the i d_y and i y parts
  switch (op) {
    case PolarOp::a_minus:
      cd = mp.xi;
      cm = -kI * mp.xi_dot;
      ysign = 1.0;
      break;
    case PolarOp::a_plus:
      cd = -std::conj(mp.xi);
      cm = kI * std::conj(mp.xi_dot);
      ysign = -1.0;
      break;
    case PolarOp::c_minus:
      cd = mp.xi;
      cm = -kI * mp.xi_dot;
      ysign = -1.0;
      break;
    case PolarOp::c_plus:
      cd = -std::conj(mp.xi);
      cm = kI * std::conj(mp.xi_dot);
      ysign = 1.0;
      break;
  }

  Field out(nx * ny, Complex(0.0, 0.0));
  for (std::size_t ix = 2; ix + 2 < nx; ++ix) {
    const double x = gx.at(ix);
    for (std::size_t iy = 2; iy + 2 < ny; ++iy) {
      const double y = gy.at(iy);
      const std::size_t i = ix * ny + iy;
      const Complex dx =
          (f[i - 2 * ny] - 8.0 * f[i - ny] + 8.0 * f[i + ny] - f[i + 2 * ny]) *
          cx;
      const Complex dy = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] -
                          f[i + 2]) *
                         cy;
      out[i] = inv_sqrt2 * (cd * (dx + ysign * kI * dy) +
                            cm * Complex(x, ysign * y) * f[i]);
    }
  }
  return out;
}

Field apply_lz_2d(const Field& f, const AxisGrid& gx, const AxisGrid& gy) {
  const std::size_t nx = gx.count, ny = gy.count;
  const double cx = 1.0 / (12.0 * gx.h());
  const double cy = 1.0 / (12.0 * gy.h());
  Field out(nx * ny, Complex(0.0, 0.0));
  for (std::size_t ix = 2; ix + 2 < nx; ++ix) {
    const double x = gx.at(ix);
    for (std::size_t iy = 2; iy + 2 < ny; ++iy) {
      const double y = gy.at(iy);
      const std::size_t i = ix * ny + iy;
      const Complex dx =
          (f[i - 2 * ny] - 8.0 * f[i - ny] + 8.0 * f[i + ny] - f[i + 2 * ny]) *
          cx;
      const Complex dy = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] -
                          f[i + 2]) *
                         cy;
      out[i] = kI * (y * dx - x * dy);
    }
  }
  return out;
}

Field sample_omega(const ModePoint& mp, const PolarQN& qn, const AxisGrid& gx,
                   const AxisGrid& gy) {
  Field f(gx.count * gy.count);
  parallel_for(gx.count, [&](std::size_t b, std::size_t e) {
    for (std::size_t ix = b; ix < e; ++ix) {
      const double x = gx.at(ix);
      for (std::size_t iy = 0; iy < gy.count; ++iy) {
        const double y = gy.at(iy);
        f[ix * gy.count + iy] =
            omega_state_at(mp, qn, std::hypot(x, y), std::atan2(y, x));
      }
    }
  });
  return f;
}

}  // namespace

std::vector<CheckReport> polar_ladder_check(const ModeSolution& radial,
                                            const PolarQN& qn,
                                            const GridSpec& grid, double tol) {
  grid.validate(2);
  const AxisGrid& gx = grid.axes[0];
  const AxisGrid& gy = grid.axes[1];
  const double w = gx.h() * gy.h();
  const std::size_t ny = gy.count;

  struct Case {
    PolarOp op;
    const char* name;
    PolarQN target;   // n or m < 0 means the zero target
    double factor;
  };
  const std::vector<Case> cases = {
      {PolarOp::a_minus, "polar_ladder_a_minus", {qn.n - 1, qn.m},
       std::sqrt(static_cast<double>(qn.n))},
      {PolarOp::a_plus, "polar_ladder_a_plus", {qn.n + 1, qn.m},
       std::sqrt(static_cast<double>(qn.n) + 1.0)},
      {PolarOp::c_minus, "polar_ladder_c_minus", {qn.n, qn.m - 1},
       std::sqrt(static_cast<double>(qn.m))},
      {PolarOp::c_plus, "polar_ladder_c_plus", {qn.n, qn.m + 1},
       std::sqrt(static_cast<double>(qn.m) + 1.0)},
  };

  std::vector<DefectStats> stats(cases.size());
  for (double t : grid.times) {
    const ModePoint mp = mode_at(radial, t);
    const Field base = sample_omega(mp, qn, gx, gy);
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const Field applied = apply_ladder_2d(base, cases[c].op, mp, gx, gy);
      const bool zero_target =
          cases[c].target.n < 0 || cases[c].target.m < 0;
      const Field target = zero_target
                               ? Field(base.size(), Complex(0.0, 0.0))
                               : sample_omega(mp, cases[c].target, gx, gy);
      double acc = 0.0;
      for (std::size_t ix = 2; ix + 2 < gx.count; ++ix) {
        for (std::size_t iy = 2; iy + 2 < ny; ++iy) {
          const std::size_t i = ix * ny + iy;
          const Complex d = applied[i] - cases[c].factor * target[i];
          stats[c].add_point(d);
          acc += std::norm(d) * w;
        }
      }
      stats[c].add_slice(acc);
    }
  }

  const std::string params =
      "n=" + std::to_string(qn.n) + ",m=" + std::to_string(qn.m);
  std::vector<CheckReport> reports;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    reports.push_back({cases[c].name, params, stats[c].max_norm,
                       stats[c].rms(), tol, stats[c].max_norm <= tol});
  }
  return reports;
}

std::vector<CheckReport> eigen_check(const ModeSolution& radial,
                                     const PolarQN& qn, const GridSpec& grid,
                                     double tol) {
  grid.validate(2);
  const AxisGrid& gx = grid.axes[0];
  const AxisGrid& gy = grid.axes[1];
  const std::size_t ny = gy.count;

  struct Expect {
    const char* name;
    double value;
  };
  const Expect expected[6] = {
      {"eigen_Lz", static_cast<double>(qn.m - qn.n)},
      {"eigen_K", static_cast<double>(qn.n + qn.m + 1)},
      {"eigen_f", qn.n + 0.5},
      {"eigen_d", qn.m + 0.5},
      {"casimir_a", -0.5},
      {"casimir_c", -0.5},
  };
  double dev[6] = {0, 0, 0, 0, 0, 0};
  double relres[6] = {0, 0, 0, 0, 0, 0};

  for (double t : grid.times) {
    const ModePoint mp = mode_at(radial, t);
    const Field base = sample_omega(mp, qn, gx, gy);
    const Field na = apply_ladder_2d(
        apply_ladder_2d(base, PolarOp::a_minus, mp, gx, gy), PolarOp::a_plus,
        mp, gx, gy);
    const Field nc = apply_ladder_2d(
        apply_ladder_2d(base, PolarOp::c_minus, mp, gx, gy), PolarOp::c_plus,
        mp, gx, gy);
    const Field lz = apply_lz_2d(base, gx, gy);

    const std::size_t margin = 4;
    Field ops[6];
    ops[0] = lz;
    ops[1].resize(base.size());
    ops[2].resize(base.size());
    ops[3].resize(base.size());
    ops[4].resize(base.size());
    ops[5].resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      const Complex k = na[i] + nc[i] + base[i];
      const Complex fv = 0.5 * (k - lz[i]);
      const Complex dv = 0.5 * (k + lz[i]);
      ops[1][i] = k;
      ops[2][i] = fv;
      ops[3][i] = dv;
      ops[4][i] = na[i] - fv;
      ops[5][i] = nc[i] - dv;
    }

    for (int c = 0; c < 6; ++c) {
      Complex num(0.0, 0.0);
      double den = 0.0;
      double res_sq = 0.0;
      for (std::size_t ix = margin; ix + margin < gx.count; ++ix) {
        for (std::size_t iy = margin; iy + margin < ny; ++iy) {
          const std::size_t i = ix * ny + iy;
          num += std::conj(base[i]) * ops[c][i];
          den += std::norm(base[i]);
          res_sq += std::norm(ops[c][i] - expected[c].value * base[i]);
        }
      }
      const Complex lambda = num / den;
      dev[c] = std::max(dev[c], std::abs(lambda - expected[c].value));
      relres[c] = std::max(relres[c], std::sqrt(res_sq / den));
    }
  }

  const std::string params =
      "n=" + std::to_string(qn.n) + ",m=" + std::to_string(qn.m);
  std::vector<CheckReport> reports;
  for (int c = 0; c < 6; ++c) {
    reports.push_back({expected[c].name, params, dev[c], relres[c], tol,
                       dev[c] <= tol});
  }
  return reports;
}

namespace {

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace

CheckReport norm_conservation_1d(const Sampler1D& state, const GridSpec& grid,
                                 double tol, const std::string& label) {
  grid.validate(1);
  const AxisGrid& gz = grid.axes[0];
  const double h = gz.h();

  double max_dev = 0.0, norm_min = 1e300, norm_max = -1e300;
  for (double t : grid.times) {
    double norm = 0.0, boundary = 0.0;
    for (std::size_t i = 0; i < gz.count; ++i) {
      const double m = std::norm(state(gz.at(i), t)) * trapezoid_weight(i, gz.count, h);
      norm += m;
      if (i < 2 || i + 2 >= gz.count) boundary += m;
    }
    if (boundary > tol / 10.0)
      throw NumericsError(label + ": grid coverage insufficient (boundary mass " +
                          std::to_string(boundary) + ")");
    max_dev = std::max(max_dev, std::abs(norm - 1.0));
    norm_min = std::min(norm_min, norm);
    norm_max = std::max(norm_max, norm);
  }
  const double variation = norm_max - norm_min;
  return {label, grid_summary(grid), max_dev, variation, tol,
          max_dev <= tol && variation <= tol};
}

CheckReport norm_conservation_3d(const Sampler3D& state, Measure measure,
                                 const GridSpec& grid, double tol,
                                 const std::string& label) {
  grid.validate(3);
  const AxisGrid& g0 = grid.axes[0];
  const AxisGrid& g1 = grid.axes[1];
  const AxisGrid& g2 = grid.axes[2];
  const bool cyl = measure == Measure::cylindrical;
  // cylindrical axes are (r, theta, z) with theta periodic
  const double h1 = cyl ? (g1.max - g1.min) / static_cast<double>(g1.count)
                        : g1.h();

  double max_dev = 0.0, norm_min = 1e300, norm_max = -1e300;
  for (double t : grid.times) {
    std::vector<double> norms(g0.count, 0.0);
    std::vector<double> boundaries(g0.count, 0.0);
    std::vector<double> axis_ring(g0.count, 0.0);
    parallel_for(g0.count, [&](std::size_t b, std::size_t e) {
      const Sampler3D local = state;
      for (std::size_t i0 = b; i0 < e; ++i0) {
        const double c0 = g0.at(i0);
        const double w0 = cyl ? c0 * trapezoid_weight(i0, g0.count, g0.h())
                              : trapezoid_weight(i0, g0.count, g0.h());
        for (std::size_t i1 = 0; i1 < g1.count; ++i1) {
          const double c1 = g1.min + h1 * static_cast<double>(i1);
          const double w1 = cyl ? h1 : trapezoid_weight(i1, g1.count, h1);
          for (std::size_t i2 = 0; i2 < g2.count; ++i2) {
            const double c2 = g2.at(i2);
            const double w =
                w0 * w1 * trapezoid_weight(i2, g2.count, g2.h());
            const double density = std::norm(local(c0, c1, c2, t));
            const double m = density * w;
            norms[i0] += m;
            if (cyl && i0 == 0) {
              axis_ring[i0] +=
                  density * w1 * trapezoid_weight(i2, g2.count, g2.h());
            }
            const bool edge0 = cyl ? i0 + 2 >= g0.count
                                   : (i0 < 2 || i0 + 2 >= g0.count);
            const bool edge1 = cyl ? false : (i1 < 2 || i1 + 2 >= g1.count);
            const bool edge2 = i2 < 2 || i2 + 2 >= g2.count;
            if (edge0 || edge1 || edge2) boundaries[i0] += m;
          }
        }
      }
    });
    double norm = 0.0, boundary = 0.0;
    for (std::size_t i0 = 0; i0 < g0.count; ++i0) {
      norm += norms[i0];
      boundary += boundaries[i0];
    }
    if (cyl && g0.min == 0.0) {
      // Euler-Maclaurin end correction at the axis: the radial integrand
      // r*G(r) has slope G(0) there, which the trapezoid rule misses.
      norm += g0.h() * g0.h() / 12.0 * axis_ring[0];
    }
    if (boundary > tol / 10.0)
      throw NumericsError(label + ": grid coverage insufficient (boundary mass " +
                          std::to_string(boundary) + ")");
    max_dev = std::max(max_dev, std::abs(norm - 1.0));
    norm_min = std::min(norm_min, norm);
    norm_max = std::max(norm_max, norm);
  }
  const double variation = norm_max - norm_min;
  return {label, grid_summary(grid), max_dev, variation, tol,
          max_dev <= tol && variation <= tol};
}

nlohmann::json residual_to_json(const ResidualReport& r) {
  return {{"check", r.check},     {"params", r.params},
          {"max_abs", r.max_abs}, {"rms", r.rms},
          {"interior_points", r.interior_points},
          {"tol", r.tol},         {"pass", r.pass}};
}

nlohmann::json check_to_json(const CheckReport& r) {
  return {{"check", r.check}, {"params", r.params}, {"max_abs", r.max_abs},
          {"rms", r.rms},     {"tol", r.tol},       {"pass", r.pass}};
}

}  // namespace paultrap

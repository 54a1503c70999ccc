#include "paultrap/mode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "paultrap/errors.hpp"
#include "paultrap/parallel.hpp"

namespace paultrap {

namespace {

// Dormand-Prince 8(5,3) tableau (Hairer, Norsett & Wanner).
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

using State = std::array<double, 4>;

// Two independent real solutions of gamma'' + 2 g(t) gamma = 0 packed as
// y = (p, p', q, q'); serves both the complex mode (p + iq) and the two
// fundamental Floquet columns.
class ModeStepper {
 public:
  ModeStepper(const CouplingFn& g, double rel_tol, double abs_tol)
      : g_(g), rtol_(rel_tol), atol_(abs_tol) {}

  void start(double t, const State& y) {
    t_ = t;
    y_ = y;
    h_ = 0.0;
    rejected_ = false;
  }

  double t() const { return t_; }
  const State& y() const { return y_; }

  void advance_to(double t_target) {
    long long steps = 0;
    while (t_ < t_target) {
      if (++steps > kMaxSteps)
        throw NumericsError("mode integration: step limit exceeded");
      if (h_ == 0.0) h_ = initial_step(t_target - t_);
      const bool clipped = h_ >= t_target - t_;
      const double h_try = clipped ? t_target - t_ : h_;
      if (h_try <= 4.0 * kEps * std::abs(t_))
        throw NumericsError("mode integration: step size underflow");
      attempt(h_try, clipped, t_target);
    }
  }

 private:
  static constexpr double kEps = std::numeric_limits<double>::epsilon();
  static constexpr long long kMaxSteps = 200000000;

  void rhs(double t, const State& y, State& out) const {
    const double w = -2.0 * g_(t);
    out[0] = y[1];
    out[1] = w * y[0];
    out[2] = y[3];
    out[3] = w * y[2];
  }

  double initial_step(double span) const {
    State f;
    rhs(t_, y_, f);
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = atol_ + rtol_ * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      d1 += (f[i] / sc) * (f[i] / sc);
    }
    double h0 = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * std::sqrt(d0 / d1)
                                           : 1e-6;
    h0 = std::min(h0, span);
    State y1, f1;
    for (int i = 0; i < 4; ++i) y1[i] = y_[i] + h0 * f[i];
    rhs(t_ + h0, y1, f1);
    double d2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = atol_ + rtol_ * std::abs(y_[i]);
      d2 += ((f1[i] - f[i]) / sc) * ((f1[i] - f[i]) / sc);
    }
    d2 = std::sqrt(d2) / h0;
    const double dmax = std::max(std::sqrt(d1), d2);
    const double h1 = dmax > 1e-15 ? std::pow(0.01 / dmax, 1.0 / 8.0)
                                   : std::max(1e-6, h0 * 1e-3);
    return std::min({100.0 * h0, h1, span});
  }

  void attempt(double h, bool clipped, double t_target) {
    State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12;
    State w, ysum, ynew;
    const double t = t_;
    const State& y = y_;

    rhs(t, y, k1);
    for (int i = 0; i < 4; ++i) w[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, w, k2);
    for (int i = 0; i < 4; ++i) w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, w, k3);
    for (int i = 0; i < 4; ++i) w[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
    rhs(t + c4 * h, w, k4);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, w, k5);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + c6 * h, w, k6);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + c7 * h, w, k7);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] +
                         a86 * k6[i] + a87 * k7[i]);
    rhs(t + c8 * h, w, k8);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] +
                         a96 * k6[i] + a97 * k7[i] + a98 * k8[i]);
    rhs(t + c9 * h, w, k9);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] +
                         a106 * k6[i] + a107 * k7[i] + a108 * k8[i] +
                         a109 * k9[i]);
    rhs(t + c10 * h, w, k10);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] +
                         a116 * k6[i] + a117 * k7[i] + a118 * k8[i] +
                         a119 * k9[i] + a1110 * k10[i]);
    rhs(t + c11 * h, w, k11);
    for (int i = 0; i < 4; ++i)
      w[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] +
                         a126 * k6[i] + a127 * k7[i] + a128 * k8[i] +
                         a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i]);
    rhs(t + h, w, k12);

    for (int i = 0; i < 4; ++i) {
      ysum[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] +
                b9 * k9[i] + b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
      ynew[i] = y[i] + h * ysum[i];
    }

    double err3 = 0.0, err5 = 0.0;
    bool finite = true;
    for (int i = 0; i < 4; ++i) {
      if (!std::isfinite(ynew[i])) finite = false;
      const double sc =
          atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e3 = ysum[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
      const double e5 = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] +
                        er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                        er11 * k11[i] + er12 * k12[i];
      err3 += (e3 / sc) * (e3 / sc);
      err5 += (e5 / sc) * (e5 / sc);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    const double err = finite ? h * err5 / std::sqrt(4.0 * deno)
                              : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      for (int i = 0; i < 4; ++i) {
        if (std::abs(ynew[i]) > 1e280)
          throw NumericsError("mode integration: solution overflow");
      }
      t_ = clipped ? t_target : t_ + h;
      y_ = ynew;
      const double fac =
          std::clamp(std::pow(std::max(err, 1e-32), 0.125) / 0.9, 1.0 / 6.0, 3.0);
      double hnew = h / fac;
      if (rejected_) hnew = std::min(hnew, h);
      h_ = hnew;
      rejected_ = false;
    } else {
      if (!std::isfinite(err)) {
        h_ = h / 3.0;
      } else {
        h_ = h / std::min(3.0, std::pow(err, 0.125) / 0.9);
      }
      rejected_ = true;
    }
  }

  const CouplingFn& g_;
  double rtol_;
  double atol_;
  double t_ = 0.0;
  State y_{};
  double h_ = 0.0;
  bool rejected_ = false;
};

std::vector<double> uniform_times(double t_start, double t_end,
                                  std::size_t samples) {
  std::vector<double> times(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(samples - 1);
    times[i] = t_start + (t_end - t_start) * s;
  }
  times.back() = t_end;
  return times;
}

Complex wronskian(Complex xi, Complex xi_dot) {
  return xi * std::conj(xi_dot) - xi_dot * std::conj(xi);
}

// phi, phi_dot, theta sequences and the drift from the raw samples.
void finish_mode(ModeSolution& mode) {
  const std::size_t n = mode.t.size();
  mode.phi.resize(n);
  mode.phi_dot.resize(n);
  mode.theta.resize(n);
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex xi = mode.xi[i];
    const Complex xd = mode.xi_dot[i];
    mode.phi[i] = 2.0 * std::norm(xi);
    mode.phi_dot[i] = 4.0 * std::real(xd * std::conj(xi));
    drift = std::max(drift, std::abs(wronskian(xi, xd) + Complex(0.0, 1.0)));
    if (i == 0) {
      mode.theta[i] = std::arg(xi);
    } else {
      mode.theta[i] = mode.theta[i - 1] + std::arg(xi / mode.xi[i - 1]);
    }
  }
  mode.wronskian_drift = drift;
}

}  // namespace

bool ModeSolution::in_span(double time) const {
  return time >= t.front() && time <= t.back();
}

ModeSolution sho_mode(double omega_ref, std::vector<double> times) {
  if (omega_ref <= 0.0)
    throw std::invalid_argument("sho_mode: omega_ref must be > 0");
  if (times.size() < 2)
    throw std::invalid_argument("sho_mode: need at least 2 sample times");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("sho_mode: times must be strictly increasing");
  }
  const double amp = 1.0 / std::sqrt(2.0 * omega_ref);
  ModeSolution mode;
  mode.axis = Axis::radial;
  mode.t = std::move(times);
  const std::size_t n = mode.t.size();
  mode.xi.resize(n);
  mode.xi_dot.resize(n);
  mode.g.assign(n, 0.5 * omega_ref * omega_ref);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex phase = std::polar(amp, omega_ref * mode.t[i]);
    mode.xi[i] = phase;
    mode.xi_dot[i] = Complex(0.0, omega_ref) * phase;
  }
  finish_mode(mode);
  return mode;
}

std::pair<Complex, Complex> default_ic(const CouplingFn& coupling,
                                       double t_start) {
  const double g0 = coupling(t_start);
  const double w = g0 > 0.0 ? std::sqrt(2.0 * g0) : 1.0;
  const Complex xi0(1.0 / std::sqrt(2.0 * w), 0.0);
  return {xi0, Complex(0.0, w) * xi0};
}

RawTrajectory solve_mode_equation(const CouplingFn& coupling, Complex y0,
                                  Complex ydot0, double t_start, double t_end,
                                  std::size_t samples, double rel_tol,
                                  double abs_tol) {
  if (!(t_end > t_start))
    throw std::invalid_argument("solve_mode_equation: t_end must be > t_start");
  if (samples < 2)
    throw std::invalid_argument("solve_mode_equation: need >= 2 samples");
  RawTrajectory out;
  out.t = uniform_times(t_start, t_end, samples);
  out.y.resize(samples);
  out.ydot.resize(samples);

  ModeStepper stepper(coupling, rel_tol, abs_tol);
  stepper.start(t_start, {y0.real(), ydot0.real(), y0.imag(), ydot0.imag()});
  out.y[0] = y0;
  out.ydot[0] = ydot0;
  for (std::size_t i = 1; i < samples; ++i) {
    stepper.advance_to(out.t[i]);
    const State& y = stepper.y();
    out.y[i] = Complex(y[0], y[2]);
    out.ydot[i] = Complex(y[1], y[3]);
  }
  return out;
}

ModeSolution integrate_mode(const CouplingFn& coupling, Complex xi0,
                            Complex xi_dot0, double t_start, double t_end,
                            std::size_t samples, Axis axis,
                            const IntegrateOptions& options) {
  const Complex w0 = wronskian(xi0, xi_dot0);
  if (std::abs(w0 + Complex(0.0, 1.0)) > 1e-12) {
    throw std::invalid_argument(
        "integrate_mode: initial conditions must satisfy W(xi, conj(xi)) = -i");
  }
  RawTrajectory raw = solve_mode_equation(coupling, xi0, xi_dot0, t_start,
                                          t_end, samples, options.rel_tol,
                                          options.abs_tol);
  ModeSolution mode;
  mode.axis = axis;
  mode.t = std::move(raw.t);
  mode.xi = std::move(raw.y);
  mode.xi_dot = std::move(raw.ydot);
  mode.g.resize(mode.t.size());
  for (std::size_t i = 0; i < mode.t.size(); ++i) mode.g[i] = coupling(mode.t[i]);
  finish_mode(mode);
  if (!(mode.wronskian_drift <= options.wronskian_tol)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "integrate_mode: Wronskian drift %.3e exceeds tolerance %.3e",
                  mode.wronskian_drift, options.wronskian_tol);
    throw NumericsError(msg);
  }
  for (double p : mode.phi) {
    if (!(p > 0.0)) throw NumericsError("integrate_mode: phi lost positivity");
  }
  return mode;
}

ModePoint mode_at(const ModeSolution& mode, double t) {
  if (mode.t.size() < 2)
    throw std::invalid_argument("mode_at: mode has fewer than 2 samples");
  const double span = mode.t.back() - mode.t.front();
  const double slack = 1e-9 * span;
  if (t < mode.t.front() - slack || t > mode.t.back() + slack)
    throw std::out_of_range("mode_at: t outside the mode span");
  const double tc = std::clamp(t, mode.t.front(), mode.t.back());

  const auto it = std::upper_bound(mode.t.begin(), mode.t.end(), tc);
  std::size_t i = (it == mode.t.begin()) ? 0 : (it - mode.t.begin() - 1);
  if (i >= mode.t.size() - 1) i = mode.t.size() - 2;

  ModePoint mp;
  if (tc == mode.t[i] || tc == mode.t[i + 1]) {
    const std::size_t j = (tc == mode.t[i]) ? i : i + 1;
    mp.xi = mode.xi[j];
    mp.xi_dot = mode.xi_dot[j];
    mp.phi = mode.phi[j];
    mp.phi_dot = mode.phi_dot[j];
    mp.theta = mode.theta[j];
    return mp;
  }

  const double h = mode.t[i + 1] - mode.t[i];
  const double s = (tc - mode.t[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;

  const Complex xi0 = mode.xi[i], xi1 = mode.xi[i + 1];
  const Complex xd0 = mode.xi_dot[i], xd1 = mode.xi_dot[i + 1];
  const Complex xdd0 = -2.0 * mode.g[i] * xi0;
  const Complex xdd1 = -2.0 * mode.g[i + 1] * xi1;

  mp.xi = h00 * xi0 + h10 * h * xd0 + h01 * xi1 + h11 * h * xd1;
  mp.xi_dot = h00 * xd0 + h10 * h * xdd0 + h01 * xd1 + h11 * h * xdd1;
  mp.phi = 2.0 * std::norm(mp.xi);
  mp.phi_dot = 4.0 * std::real(mp.xi_dot * std::conj(mp.xi));
  mp.theta = mode.theta[i] + std::arg(mp.xi / xi0);
  return mp;
}

FloquetResult floquet_stability(const CouplingFn& coupling, double period,
                                double rel_tol) {
  if (!(period > 0.0))
    throw std::invalid_argument("floquet_stability: period must be > 0");
  ModeStepper stepper(coupling, rel_tol, rel_tol);
  stepper.start(0.0, {1.0, 0.0, 0.0, 1.0});
  stepper.advance_to(period);
  const State& y = stepper.y();
  // monodromy [[p, q], [p', q']]
  FloquetResult res;
  res.trace = y[0] + y[3];
  res.det = y[0] * y[3] - y[2] * y[1];
  if (std::abs(res.det - 1.0) > 1e-9)
    throw NumericsError("floquet_stability: monodromy determinant deviates from 1");
  const Complex disc = std::sqrt(Complex(res.trace * res.trace - 4.0, 0.0));
  res.multiplier1 = (res.trace + disc) / 2.0;
  res.multiplier2 = (res.trace - disc) / 2.0;
  res.marginal = std::abs(std::abs(res.trace) - 2.0) <= 1e-12;
  res.stable = !res.marginal && std::abs(res.trace) < 2.0;
  return res;
}

StabilityChart stability_scan(const TrapConfig& tmpl, const SweepRange& a_range,
                              const SweepRange& q_range) {
  for (const SweepRange& r : {a_range, q_range}) {
    if (r.count < 2) throw ConfigError("stability_scan: sweep counts must be >= 2");
    if (!(r.max >= r.min)) throw ConfigError("stability_scan: invalid sweep range");
  }
  tmpl.validate();

  StabilityChart chart;
  chart.p1.resize(a_range.count);
  chart.p2.resize(q_range.count);
  for (std::size_t i = 0; i < a_range.count; ++i)
    chart.p1[i] = a_range.min + (a_range.max - a_range.min) *
                                    static_cast<double>(i) /
                                    static_cast<double>(a_range.count - 1);
  for (std::size_t j = 0; j < q_range.count; ++j)
    chart.p2[j] = q_range.min + (q_range.max - q_range.min) *
                                    static_cast<double>(j) /
                                    static_cast<double>(q_range.count - 1);

  const std::size_t cells = a_range.count * q_range.count;
  chart.trace_r.resize(cells);
  chart.trace_z.resize(cells);
  chart.stable_r.resize(cells);
  chart.stable_z.resize(cells);
  chart.stable_trap.resize(cells);

  const double period = drive_period(tmpl);
  parallel_for(cells, [&](std::size_t begin, std::size_t end) {
    for (std::size_t cell = begin; cell < end; ++cell) {
      const double a = chart.p1[cell / q_range.count];
      const double q = chart.p2[cell % q_range.count];
      const CouplingFn g = coupling_from_mathieu(a, q, tmpl.omega, tmpl.t0);
      const CouplingFn g3 = [&g](double t) { return -2.0 * g(t); };
      const FloquetResult fr = floquet_stability(g, period, 1e-10);
      const FloquetResult fz = floquet_stability(g3, period, 1e-10);
      chart.trace_r[cell] = fr.trace;
      chart.trace_z[cell] = fz.trace;
      chart.stable_r[cell] = fr.stable ? 1 : 0;
      chart.stable_z[cell] = fz.stable ? 1 : 0;
      chart.stable_trap[cell] = (fr.stable && fz.stable) ? 1 : 0;
    }
  });
  return chart;
}

}  // namespace paultrap

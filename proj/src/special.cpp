#include "paultrap/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace paultrap {

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: n must be >= 0");
  if (n == 0) return 1.0;
  double hm = 1.0;        // H_0
  double h = 2.0 * x;     // H_1
  for (int k = 1; k < n; ++k) {
    double hp = 2.0 * x * h - 2.0 * k * hm;
    hm = h;
    h = hp;
  }
  return h;
}

double glaguerre(int k, int alpha, double x) {
  if (k < 0 || alpha < 0)
    throw std::invalid_argument("glaguerre: k and alpha must be >= 0");
  if (k == 0) return 1.0;
  double lm = 1.0;                    // L_0
  double l = 1.0 + alpha - x;         // L_1
  for (int j = 1; j < k; ++j) {
    double lp = ((2.0 * j + 1.0 + alpha - x) * l - (j + alpha) * lm) / (j + 1.0);
    lm = l;
    l = lp;
  }
  return l;
}

namespace {

constexpr int kTableSize = 171;  // ln(n!) for n <= 170 stays finite in double

std::array<double, kTableSize> build_log_factorials() {
  std::array<double, kTableSize> table{};
  long double acc = 0.0L;
  table[0] = 0.0;
  for (int n = 1; n < kTableSize; ++n) {
    acc += std::log(static_cast<long double>(n));
    table[n] = static_cast<double>(acc);
  }
  return table;
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
  static const std::array<double, kTableSize> table = build_log_factorials();
  if (n < kTableSize) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace paultrap

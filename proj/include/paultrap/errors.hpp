#ifndef PAULTRAP_ERRORS_HPP
#define PAULTRAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace paultrap {

// Bad or inconsistent input: malformed JSON, unknown keys, invalid ranges.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: Wronskian drift out of tolerance, solution overflow,
// step-size underflow, insufficient grid coverage.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

// (n_r, l_z) parity violation: n_r - |l_z| must be even and non-negative.
class SelectionRuleError : public std::invalid_argument {
 public:
  explicit SelectionRuleError(const std::string& msg)
      : std::invalid_argument(msg) {}
};

}  // namespace paultrap

#endif

#ifndef PAULTRAP_SUITES_HPP
#define PAULTRAP_SUITES_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "paultrap/states_cartesian.hpp"
#include "paultrap/verify.hpp"

namespace paultrap {

struct SuiteResult {
  std::vector<ResidualReport> residuals;
  std::vector<CheckReport> checks;
  std::vector<std::string> notes;  // skipped axes etc., metadata only

  bool all_pass() const;
};

// suite = "sho" (closed-form reference oscillator), "driven" (the config's
// couplings; checks run per Floquet-stable axis), "negative" (controls that
// must fail), or "full" (sho + driven).
SuiteResult run_suite(const TrapConfig& cfg, const std::string& suite);

nlohmann::json suite_to_json(const SuiteResult& result);

std::vector<double> linspace(double a, double b, std::size_t n);

// State samplers for the verification operators. Each copy memoizes the
// mode data of the last-used t, so workers must copy rather than share.
// The referenced modes must outlive the sampler.
Sampler1D axis_state_sampler(const ModeSolution& mode, int n);
Sampler3D psi_sampler(const ModeSolution& radial, const ModeSolution& axial,
                      const CartesianQN& qn);
SamplerPolar omega_sampler(const ModeSolution& radial, const PolarQN& qn);

// Negative controls: candidate states that must be rejected by the
// residual checks.
Sampler1D wrong_width_z0(const ModeSolution& mode);     // phi doubled
Sampler1D unnormalized_z0(const ModeSolution& mode);    // phase factor dropped
Sampler3D mismatched_psi(const ModeSolution& radial,
                         const CartesianQN& qn);  // radial mode in the z slot
SamplerPolar wrong_theta_omega(const ModeSolution& radial,
                               const PolarQN& qn);  // extra e^{i theta}

}  // namespace paultrap

#endif

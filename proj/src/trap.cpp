#include "paultrap/trap.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "paultrap/errors.hpp"

namespace paultrap {

void TrapConfig::validate() const {
  for (double v : {e, r0, vdc, vac, omega, t0}) {
    if (!std::isfinite(v)) throw ConfigError("trap: all parameters must be finite");
  }
  if (r0 <= 0.0) throw ConfigError("trap: r0 must be > 0");
  if (omega <= 0.0) throw ConfigError("trap: omega must be > 0");
  if (vac < 0.0) throw ConfigError("trap: vac must be >= 0");
}

double drive_voltage(const TrapConfig& cfg, double t) {
  return cfg.vdc - cfg.vac * std::cos(cfg.omega * (t - cfg.t0));
}

Couplings coupling(const TrapConfig& cfg, double t) {
  const double v = drive_voltage(cfg, t);
  const double g = cfg.e / (2.0 * cfg.r0 * cfg.r0) * v;
  return {g, -2.0 * g};
}

MathieuParams mathieu_params(const TrapConfig& cfg) {
  if (cfg.omega <= 0.0) throw ConfigError("mathieu_params: omega must be > 0");
  const double w2 = cfg.omega * cfg.omega;
  const double a_r = 4.0 * cfg.e * cfg.vdc / (cfg.r0 * cfg.r0 * w2);
  const double q_r = 2.0 * cfg.e * cfg.vac / (cfg.r0 * cfg.r0 * w2);
  return {a_r, q_r, -2.0 * a_r, -2.0 * q_r};
}

std::function<double(double)> radial_coupling(const TrapConfig& cfg) {
  return [cfg](double t) { return coupling(cfg, t).g; };
}

std::function<double(double)> axial_coupling(const TrapConfig& cfg) {
  return [cfg](double t) { return coupling(cfg, t).g3; };
}

double drive_period(const TrapConfig& cfg) {
  return 2.0 * std::numbers::pi / cfg.omega;
}

TrapConfig trap_from_mathieu(double a_r, double q_r, double omega, double e,
                             double r0, double t0) {
  TrapConfig cfg;
  cfg.e = e;
  cfg.r0 = r0;
  cfg.omega = omega;
  cfg.t0 = t0;
  const double w2 = omega * omega;
  cfg.vdc = a_r * r0 * r0 * w2 / (4.0 * e);
  cfg.vac = q_r * r0 * r0 * w2 / (2.0 * e);
  cfg.validate();
  return cfg;
}

std::function<double(double)> coupling_from_mathieu(double a, double q,
                                                    double omega, double t0) {
  const double w2 = omega * omega;
  return [=](double t) {
    return w2 / 8.0 * a - w2 / 4.0 * q * std::cos(omega * (t - t0));
  };
}

TrapConfig trap_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("trap: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "e" && key != "r0" && key != "vdc" && key != "vac" &&
        key != "omega" && key != "t0") {
      throw ConfigError("trap: unknown key \"" + key + "\"");
    }
    if (!value.is_number()) throw ConfigError("trap: key \"" + key + "\" must be a number");
  }
  for (const char* key : {"e", "r0", "vdc", "vac", "omega"}) {
    if (!j.contains(key))
      throw ConfigError(std::string("trap: missing key \"") + key + "\"");
  }
  TrapConfig cfg;
  cfg.e = j.at("e").get<double>();
  cfg.r0 = j.at("r0").get<double>();
  cfg.vdc = j.at("vdc").get<double>();
  cfg.vac = j.at("vac").get<double>();
  cfg.omega = j.at("omega").get<double>();
  cfg.t0 = j.value("t0", 0.0);
  cfg.validate();
  return cfg;
}

TrapConfig trap_from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("trap: invalid JSON");
  return trap_from_json(j);
}

}  // namespace paultrap

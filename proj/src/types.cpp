#include "maisense/types.hpp"

#include "maisense/errors.hpp"

#include <cmath>
#include <string>

namespace maisense {

std::string_view to_string(Preparation p) {
  return p == Preparation::ModeSeparable ? "ms" : "me";
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Linear:
      return "linear";
    case Strategy::LocalMAI:
      return "local-mai";
    case Strategy::NonlocalMAI:
      return "nonlocal-mai";
  }
  return "?";
}

Preparation parse_preparation(std::string_view text) {
  if (text == "ms") return Preparation::ModeSeparable;
  if (text == "me") return Preparation::ModeEntangled;
  throw ConfigError("unknown preparation '" + std::string(text) + "' (expected ms|me)");
}

Strategy parse_strategy(std::string_view text) {
  if (text == "linear") return Strategy::Linear;
  if (text == "local-mai") return Strategy::LocalMAI;
  if (text == "nonlocal-mai") return Strategy::NonlocalMAI;
  throw ConfigError("unknown strategy '" + std::string(text) +
                    "' (expected linear|local-mai|nonlocal-mai)");
}

void SpinScenario::validate() const {
  if (atoms < 2) throw InvalidScenario("atom number N must be >= 2");
  if (modes < 1) throw InvalidScenario("mode number M must be >= 1");
  if (atoms % modes != 0)
    throw InvalidScenario("N = " + std::to_string(atoms) + " is not divisible by M = " +
                          std::to_string(modes));
  if (!std::isfinite(mu) || mu < 0.0) throw InvalidScenario("preparation time mu must be >= 0");
  if (!std::isfinite(mu_mai) || mu_mai < 0.0)
    throw InvalidScenario("MAI time mu_mai must be >= 0");
}

}  // namespace maisense

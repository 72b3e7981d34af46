#pragma once

#include "maisense/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace maisense {

struct CheckResult {
  std::string name;
  std::string measure;  // "abs" or "rel"
  double max_deviation = 0.0;
  double threshold = 0.0;
  long cases = 0;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Every closed-form block entry against the oracle for all divisors M of
/// each N and mu, mu_mai on {0, step, ...} up to 3.1. One result per
/// preparation/strategy pair.
std::vector<CheckResult> check_oracle_equivalence(std::span<const int> atoms, double step);

/// xi^-2 over all 2^M sign patterns of n, M <= 4.
CheckResult check_sign_invariance();

/// Random (Gamma, C, R): the constructed S saturates R M R^T and dominates
/// `projections` random readouts in the PSD order.
std::vector<CheckResult> check_cauchy_schwarz(int trials, int projections, std::uint64_t seed);

/// mu = 0 (spin) and r = 0 (CV) give xi^-2 = 1 for every strategy and sign
/// pattern (M <= 4).
CheckResult check_shot_noise();

/// Matrix pipeline against the noisy closed forms, and the noise ratio
/// against the quotient of closed forms.
std::vector<CheckResult> check_cv_pipeline();

/// Exchange-symmetric inverse and structured xi^-2 against dense, M <= 8.
CheckResult check_structured_inverse();

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json(const SweepConfig& cfg) const;
};

ValidationReport cmd_validate(const SweepConfig& cfg);

}  // namespace maisense

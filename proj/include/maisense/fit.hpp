#pragma once

#include <span>

namespace maisense {

struct PowerLawFit {
  double slope = 0.0;      // exponent b in y ~ a x^b
  double intercept = 0.0;  // ln a
  double rms_residual = 0.0;  // RMS of ln y - (intercept + slope ln x)
};

/// Ordinary least squares of ln y against ln x. Requires >= 3 points and
/// strictly positive data.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace maisense

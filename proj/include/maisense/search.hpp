#pragma once

#include <functional>
#include <vector>

namespace maisense {

struct Maximum1D {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of `f` on [lo, hi] down to an interval of
/// width `tol`. The returned point is the best one evaluated, so it never
/// scores below max(f(lo), f(hi)) when the caller seeds it with those.
Maximum1D golden_max(const std::function<double(double)>& f, double lo, double hi, double tol);

/// `steps` evenly spaced points from lo to hi inclusive (steps >= 2).
std::vector<double> linspace(double lo, double hi, int steps);

/// `steps` log-spaced points from lo to hi inclusive (0 < lo < hi).
std::vector<double> logspace(double lo, double hi, int steps);

}  // namespace maisense

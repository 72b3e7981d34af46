#include "maisense/search.hpp"

#include "maisense/errors.hpp"

#include <cmath>

namespace maisense {

Maximum1D golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(hi >= lo)) throw EmptyRange("golden_max: reversed interval");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  Maximum1D best = fc >= fd ? Maximum1D{c, fc} : Maximum1D{d, fd};
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc > best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd > best.value) best = {d, fd};
    }
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw EmptyRange("linspace needs at least 2 points");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = lo + (hi - lo) * i / (steps - 1);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi > lo)) throw EmptyRange("logspace needs 0 < lo < hi");
  std::vector<double> out = linspace(std::log(lo), std::log(hi), steps);
  for (double& v : out) v = std::exp(v);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace maisense

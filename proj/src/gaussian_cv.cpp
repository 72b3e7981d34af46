#include "maisense/gaussian_cv.hpp"

#include "maisense/errors.hpp"
#include "maisense/spin_moments.hpp"

#include <cmath>

namespace maisense {
namespace {

Eigen::Matrix2d mat(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

// Covariance of the TMSV with effective squeezing `r_eff`, quadratures
// rescaled by (sx, sp).
void tmsv_covariance(BlockSet& b, double r_eff, double sx, double sp) {
  const double ch = std::cosh(2.0 * r_eff) / 2.0;
  const double sh = std::sinh(2.0 * r_eff) / 2.0;
  b.gamma_mm = mat(sx * sx * ch, 0.0, 0.0, sp * sp * ch);
  b.gamma_mn = mat(-sx * sx * sh, 0.0, 0.0, sp * sp * sh);
}

}  // namespace

void GaussianScenario::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!ok(r) || !ok(r_mai) || !ok(sigma))
    throw InvalidScenario("r, r_mai and sigma must be finite and non-negative");
}

MomentData cv_matrices(const GaussianScenario& gs) {
  gs.validate();
  BlockSet b;
  switch (gs.strategy) {
    case Strategy::Linear:
      tmsv_covariance(b, gs.r, 1.0, 1.0);
      b.c_mm = mat(0.0, 1.0, -1.0, 0.0);
      break;
    case Strategy::NonlocalMAI: {
      tmsv_covariance(b, gs.r - gs.r_mai, 1.0, 1.0);
      const double ch = std::cosh(gs.r_mai);
      const double sh = std::sinh(gs.r_mai);
      b.c_mm = mat(0.0, -ch, ch, 0.0);
      b.c_mn = mat(0.0, -sh, -sh, 0.0);
      break;
    }
    case Strategy::LocalMAI: {
      const double e = std::exp(gs.r_mai);
      tmsv_covariance(b, gs.r, e, 1.0 / e);
      b.c_mm = mat(0.0, -e, 1.0 / e, 0.0);
      break;
    }
  }
  b.gamma_mm += gs.sigma * gs.sigma * Eigen::Matrix2d::Identity();
  return assemble_full(b, 2, 2.0);
}

SqueezingOutcome cv_xi2_matrix(const GaussianScenario& gs, const EstimationTarget& t,
                               const SearchOptions& opt) {
  t.validate();
  if (t.modes() != 2) throw InvalidScenario("two-mode squeezed vacuum needs a 2-mode target");
  const MomentData md = cv_matrices(gs);
  const AngleOptimum a = maximize_angles(
      [&](double phi, double) {
        try {
          return squeezing_and_xi2(md, {phi}, t).xi2_inv;
        } catch (const DegenerateScenario&) {
          return 0.0;
        }
      },
      std::nullopt, opt);

  const SqueezingResult r = squeezing_and_xi2(md, {a.phi}, t);
  const std::vector<double> orient{t.n(0) < 0.0 ? -1.0 : 1.0, t.n(1) < 0.0 ? -1.0 : 1.0};
  SqueezingOutcome out;
  out.xi2_inv = r.xi2_inv;
  out.gain_db = to_db(r.xi2_inv);
  out.phi_opt = a.phi;
  out.mu_mai_opt = gs.strategy == Strategy::Linear ? 0.0 : gs.r_mai;
  out.s_matrix = optimal_measurement(md, {a.phi}, orient);
  out.sigma = r.sigma;
  return out;
}

double cv_xi2_closed(const GaussianScenario& gs) {
  gs.validate();
  const double k = gs.strategy == Strategy::Linear ? 1.0 : std::exp(-2.0 * gs.r_mai);
  return 1.0 / (std::exp(-2.0 * gs.r) + 2.0 * k * gs.sigma * gs.sigma);
}

double noise_ratio(double r, double r_mai, double sigma) {
  GaussianScenario g{r, Strategy::Linear, r_mai, sigma};
  g.validate();
  const double a = std::exp(-2.0 * r);
  return (a + 2.0 * sigma * sigma * std::exp(-2.0 * r_mai)) / (a + 2.0 * sigma * sigma);
}

}  // namespace maisense

#include "maisense/optimizer.hpp"

#include "maisense/errors.hpp"
#include "maisense/linalg.hpp"
#include "maisense/search.hpp"
#include "maisense/spin_moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace maisense {
namespace {

constexpr double kDegenerate = 1e-13;

std::vector<double> target_orientation(const EstimationTarget& t) {
  std::vector<double> o(t.n.size());
  for (Eigen::Index i = 0; i < t.n.size(); ++i) o[i] = t.n(i) < 0.0 ? -1.0 : 1.0;
  return o;
}

// Pseudo-inverse of a symmetric 2x2 block, same cutoff and leak test as
// covariance_pinv but without heap allocation.
Eigen::Matrix2d pinv2(const Eigen::Matrix2d& g, const Eigen::Matrix2d& signal) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
  eig.computeDirect(0.5 * (g + g.transpose()));
  const Eigen::Vector2d& w = eig.eigenvalues();
  const Eigen::Matrix2d& v = eig.eigenvectors();
  const double lmax = w.cwiseAbs().maxCoeff();
  if (!(lmax > 0.0)) {
    if (signal.cwiseAbs().maxCoeff() > 1e-8) throw SingularGamma("covariance block is zero");
    return Eigen::Matrix2d::Zero();
  }
  const double scale = std::max(1.0, signal.cwiseAbs().maxCoeff());
  Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 2; ++i) {
    if (w(i) > kPinvCutoff * lmax) {
      out += v.col(i) * v.col(i).transpose() / w(i);
    } else if ((v.col(i).transpose() * signal).cwiseAbs().maxCoeff() > 1e-8 * scale) {
      throw SingularGamma("covariance is singular along a direction carrying signal");
    }
  }
  return out;
}

double sector_lambda(const Eigen::Matrix2d& gamma, const Eigen::Matrix2d& c,
                     const Eigen::Vector2d& g) {
  const Eigen::Vector2d cg = c * g;
  return cg.dot(pinv2(gamma, c) * cg);
}

}  // namespace

EstimationTarget EstimationTarget::uniform(int modes) {
  if (modes < 1) throw InvalidScenario("target needs at least one mode");
  return {Eigen::VectorXd::Constant(modes, 1.0 / std::sqrt(double(modes)))};
}

EstimationTarget EstimationTarget::from_signs(std::span<const int> signs) {
  if (signs.empty()) throw InvalidScenario("target needs at least one mode");
  const double a = 1.0 / std::sqrt(double(signs.size()));
  EstimationTarget t{Eigen::VectorXd(static_cast<Eigen::Index>(signs.size()))};
  for (std::size_t i = 0; i < signs.size(); ++i) t.n(i) = signs[i] > 0 ? a : -a;
  return t;
}

void EstimationTarget::validate() const {
  if (n.size() < 1) throw InvalidScenario("target is empty");
  const double a = 1.0 / std::sqrt(double(n.size()));
  for (Eigen::Index i = 0; i < n.size(); ++i)
    if (std::abs(std::abs(n(i)) - a) > 1e-9)
      throw InvalidScenario("target entries must be +-1/sqrt(M)");
}

Eigen::MatrixXd generator_matrix(const GeneratorSpec& g, int modes,
                                 std::span<const double> orientation) {
  if (!orientation.empty() && static_cast<int>(orientation.size()) != modes)
    throw InvalidScenario("orientation length does not match mode count");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    const double s = orientation.empty() ? 1.0 : orientation[m];
    r(m, 2 * m) = s * std::cos(g.phi);
    r(m, 2 * m + 1) = s * std::sin(g.phi);
  }
  return r;
}

Eigen::MatrixXd moment_matrix(const MomentData& md, const GeneratorSpec& g,
                              std::span<const double> orientation) {
  const Eigen::MatrixXd r = generator_matrix(g, md.modes(), orientation);
  Eigen::MatrixXd a = r * full_moment_matrix(md.gamma, md.commutator) * r.transpose();
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd optimal_measurement(const MomentData& md, const GeneratorSpec& g,
                                    std::span<const double> orientation) {
  const Eigen::MatrixXd r = generator_matrix(g, md.modes(), orientation);
  const Eigen::MatrixXd gs =
      r * md.commutator.transpose() * covariance_pinv(md.gamma, md.commutator);
  return orthonormalize_rows(gs);
}

Eigen::MatrixXd moment_matrix_for_readout(const MomentData& md, const Eigen::MatrixXd& r,
                                          const Eigen::MatrixXd& s) {
  const Eigen::MatrixXd d = s * md.commutator * r.transpose();
  const Eigen::MatrixXd gs = s * md.gamma * s.transpose();
  Eigen::MatrixXd a = d.transpose() * covariance_pinv(gs, d) * d;
  return 0.5 * (a + a.transpose());
}

SqueezingResult squeezing_and_xi2(const MomentData& md, const GeneratorSpec& g,
                                  const EstimationTarget& t) {
  t.validate();
  if (t.modes() != md.modes()) throw InvalidScenario("target size does not match mode count");
  const std::vector<double> orient = target_orientation(t);
  const Eigen::MatrixXd a = moment_matrix(md, g, orient);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const double fmax = md.f_sn.cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() <= kDegenerate * fmax)
    throw DegenerateScenario("moment matrix is singular: some linear combination is not sensed");
  const Eigen::MatrixXd a_inv = eig.eigenvectors() *
                                eig.eigenvalues().cwiseInverse().asDiagonal() *
                                eig.eigenvectors().transpose();

  const Eigen::MatrixXd f_half = psd_sqrt(md.f_sn);
  const Eigen::MatrixXd sigma_sn = md.f_sn.inverse();
  const Eigen::MatrixXd sn_half = psd_sqrt(sigma_sn);

  SqueezingResult out;
  out.xi2_matrix = f_half * a_inv * f_half;
  out.sigma = sn_half * out.xi2_matrix * sn_half;
  out.xi2_inv = t.n.dot(sigma_sn * t.n) / t.n.dot(out.sigma * t.n);
  return out;
}

double xi2_structured(const BlockSet& b, int modes, double shot_noise, double phi) {
  const Eigen::Vector2d g(std::cos(phi), std::sin(phi));
  const double k = modes - 1;
  const double lp = sector_lambda(b.gamma_mm + k * b.gamma_mn, b.c_mm + k * b.c_mn, g);
  if (lp <= kDegenerate * shot_noise)
    throw DegenerateScenario("symmetric sector carries no signal");
  if (modes > 1) {
    const double lm = sector_lambda(b.gamma_mm - b.gamma_mn, b.c_mm - b.c_mn, g);
    if (lm <= kDegenerate * shot_noise)
      throw DegenerateScenario("antisymmetric sector carries no signal");
  }
  return lp / shot_noise;
}

MaiRange default_mai_range(const SpinScenario& s) {
  const double hi = std::max(2.0 * s.mu, 16.0 * std::numbers::pi / s.atoms_per_mode());
  return {0.0, std::min(hi, std::numbers::pi)};
}

AngleOptimum maximize_angles(const Xi2Evaluator& f, std::optional<MaiRange> mai,
                             const SearchOptions& opt) {
  if (opt.phi_steps < 2) throw EmptyRange("phi grid needs at least 2 points");
  if (mai && !(mai->hi >= mai->lo && mai->lo >= 0.0))
    throw EmptyRange("MAI range must satisfy 0 <= lo <= hi");
  const double pi = std::numbers::pi;
  const double dphi = pi / opt.phi_steps;

  std::vector<double> mus{0.0};
  if (mai) mus = mai->hi > mai->lo ? linspace(mai->lo, mai->hi, std::max(2, opt.mai_steps))
                                   : std::vector<double>{mai->lo};
  const double dmu = mus.size() > 1 ? mus[1] - mus[0] : 0.0;

  AngleOptimum best{-1.0, 0.0, mus.front()};
  for (double mu : mus)
    for (int i = 0; i < opt.phi_steps; ++i) {
      const double phi = i * dphi;
      const double v = f(phi, mu);
      if (v > best.xi2_inv) best = {v, phi, mu};
    }

  // phi is periodic with period pi, so its bracket may leave [0, pi).
  auto wrap = [pi](double phi) {
    phi = std::fmod(phi, pi);
    return phi < 0.0 ? phi + pi : phi;
  };
  for (int round = 0; round < opt.max_rounds; ++round) {
    const AngleOptimum start = best;
    const Maximum1D p = golden_max([&](double phi) { return f(wrap(phi), best.mu_mai); },
                                   best.phi - dphi, best.phi + dphi, opt.tol);
    if (p.value > best.xi2_inv) best = {p.value, wrap(p.x), best.mu_mai};
    if (dmu > 0.0) {
      const double lo = std::max(mai->lo, best.mu_mai - dmu);
      const double hi = std::min(mai->hi, best.mu_mai + dmu);
      const Maximum1D m = golden_max([&](double mu) { return f(best.phi, mu); }, lo, hi, opt.tol);
      if (m.value > best.xi2_inv) best = {m.value, best.phi, m.x};
    }
    const bool still = std::abs(best.phi - start.phi) < opt.tol &&
                       std::abs(best.mu_mai - start.mu_mai) < opt.tol;
    if (still || dmu == 0.0) break;
  }
  if (best.xi2_inv < 0.0) best.xi2_inv = 0.0;
  if (!mai) best.mu_mai = 0.0;
  return best;
}

Xi2Evaluator spin_evaluator(const SpinScenario& s) {
  s.validate();
  if (!has_closed_form(s.prep, s.strategy))
    throw InvalidScenario("no closed form for " + std::string(to_string(s.prep)) + "/" +
                          std::string(to_string(s.strategy)));
  return [s](double phi, double mu_mai) {
    SpinScenario at = s;
    at.mu_mai = mu_mai;
    try {
      return xi2_structured(spin_blocks(at), at.modes, at.atoms_per_mode(), phi);
    } catch (const DegenerateScenario&) {
      return 0.0;
    }
  };
}

SqueezingOutcome optimize_scenario(const SpinScenario& s, const EstimationTarget& t,
                                   std::optional<MaiRange> mai_range, const SearchOptions& opt) {
  s.validate();
  t.validate();
  if (t.modes() != s.modes) throw InvalidScenario("target size does not match mode count");
  std::optional<MaiRange> range;
  if (s.strategy != Strategy::Linear) range = mai_range ? *mai_range : default_mai_range(s);
  const AngleOptimum a = maximize_angles(spin_evaluator(s), range, opt);

  SpinScenario at = s;
  at.mu_mai = a.mu_mai;
  const MomentData md = spin_moments(at);
  const SqueezingResult r = squeezing_and_xi2(md, {a.phi}, t);

  SqueezingOutcome out;
  out.xi2_inv = r.xi2_inv;
  out.gain_db = to_db(r.xi2_inv);
  out.phi_opt = a.phi;
  out.mu_mai_opt = a.mu_mai;
  out.s_matrix = optimal_measurement(md, {a.phi}, target_orientation(t));
  out.sigma = r.sigma;
  return out;
}

ScalingPoint optimize_joint(int atoms, int modes, Preparation prep, Strategy strategy,
                            const SearchOptions& opt, int mu_steps) {
  SpinScenario s{atoms, modes, prep, 0.0, strategy, 0.0};
  s.validate();
  const double n = atoms;
  const std::vector<double> grid =
      logspace(0.1 * std::pow(n, -2.0 / 3.0), 10.0 * std::pow(n, -0.5), mu_steps);

  auto inner = [&](double mu) {
    SpinScenario at = s;
    at.mu = mu;
    std::optional<MaiRange> range;
    if (strategy != Strategy::Linear) range = default_mai_range(at);
    return maximize_angles(spin_evaluator(at), range, opt);
  };

  std::size_t best_i = 0;
  AngleOptimum best = inner(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const AngleOptimum a = inner(grid[i]);
    if (a.xi2_inv > best.xi2_inv) {
      best = a;
      best_i = i;
    }
  }
  double best_mu = grid[best_i];
  const double lo = grid[best_i == 0 ? 0 : best_i - 1];
  const double hi = grid[std::min(best_i + 1, grid.size() - 1)];
  AngleOptimum refined = best;
  const Maximum1D m = golden_max(
      [&](double mu) {
        const AngleOptimum a = inner(mu);
        if (a.xi2_inv > refined.xi2_inv) refined = a;
        return a.xi2_inv;
      },
      lo, hi, opt.tol * best_mu);
  if (m.value > best.xi2_inv) {
    best = refined;
    best_mu = m.x;
  }
  return {atoms, best.xi2_inv, best_mu, best.mu_mai, best.phi};
}

ScalingResult scaling_sweep(std::span<const int> atoms, int modes, Preparation prep,
                            Strategy strategy, const EstimationTarget& t,
                            const SearchOptions& opt) {
  t.validate();
  if (t.modes() != modes) throw InvalidScenario("target size does not match mode count");
  if (atoms.size() < 3) throw EmptyRange("scaling sweep needs at least 3 atom numbers");
  ScalingResult out;
  std::vector<double> x, y;
  for (int n : atoms) {
    // Exchange symmetry plus generator alignment make xi^-2 independent of
    // the sign pattern of t, so the structured evaluator covers every target.
    out.points.push_back(optimize_joint(n, modes, prep, strategy, opt));
    x.push_back(n);
    y.push_back(out.points.back().xi2_inv);
  }
  out.fit = fit_power_law(x, y);
  return out;
}

}  // namespace maisense

#include "maisense/spin_moments.hpp"

#include "maisense/errors.hpp"

#include <cmath>
#include <string>

namespace maisense {
namespace {

// prefactor * base^k. Negative k only ever appears together with an
// (N_m - 1) prefactor, which vanishes exactly when k would be -1, so a zero
// prefactor short-circuits instead of producing 0 * inf.
double scaled_pow(double prefactor, double base, int k) {
  if (prefactor == 0.0) return 0.0;
  return prefactor * std::pow(base, static_cast<double>(k));
}

void require(const SpinScenario& s, Preparation prep, Strategy strategy, const char* name) {
  s.validate();
  if (s.prep != prep || s.strategy != strategy)
    throw InvalidScenario(std::string(name) + ": scenario is " +
                          std::string(to_string(s.prep)) + "/" +
                          std::string(to_string(s.strategy)));
}

Eigen::Matrix2d symmetric(double yy, double yz, double zz) {
  Eigen::Matrix2d m;
  m << yy, yz, yz, zz;
  return m;
}

// Shared by the linear and the nonlocal-MAI covariance: both only see the
// net twist `angle` applied through exponent `k` = (total atoms in the
// twisted register) - 2.
Eigen::Matrix2d local_covariance(double n, double angle, int k) {
  const double yy = n / 8.0 * (n + 1.0 - scaled_pow(n - 1.0, std::cos(angle), k));
  const double yz =
      scaled_pow(n * (n - 1.0) / 4.0, std::cos(angle / 2.0), k) * std::sin(angle / 2.0);
  return symmetric(yy, yz, n / 4.0);
}

Eigen::Matrix2d cross_covariance(double n, double angle, int k) {
  const double yy = n * n / 8.0 * (1.0 - std::pow(std::cos(angle), k));
  const double yz = n * n / 4.0 * std::pow(std::cos(angle / 2.0), k) * std::sin(angle / 2.0);
  return symmetric(yy, yz, 0.0);
}

Eigen::Matrix2d linear_commutator(double n, double mu, int k) {
  const double c = n / 2.0 * std::pow(std::cos(mu / 2.0), k);
  Eigen::Matrix2d m;
  m << 0.0, c, -c, 0.0;
  return m;
}

}  // namespace

BlockSet blocks_ms_linear(const SpinScenario& s) {
  require(s, Preparation::ModeSeparable, Strategy::Linear, "blocks_ms_linear");
  const int nm = s.atoms_per_mode();
  const double n = nm;
  BlockSet b;
  b.gamma_mm = local_covariance(n, s.mu, nm - 2);
  b.c_mm = linear_commutator(n, s.mu, nm - 1);
  return b;
}

BlockSet blocks_ms_local_mai(const SpinScenario& s) {
  require(s, Preparation::ModeSeparable, Strategy::LocalMAI, "blocks_ms_local_mai");
  const int nm = s.atoms_per_mode();
  const double n = nm;
  const double mu = s.mu;
  const double ml = s.mu_mai;
  BlockSet b;
  b.gamma_mm = local_covariance(n, mu - ml, nm - 2);
  const double yy = scaled_pow(n * (n - 1.0) / 4.0, std::cos(mu - ml / 2.0), nm - 2) +
                    scaled_pow(n * (n - 1.0) / 4.0, std::cos(ml / 2.0), nm - 2);
  b.c_mm << yy * std::sin(ml / 2.0), n / 2.0 * std::pow(std::cos((mu - ml) / 2.0), nm - 1),
      -n / 2.0 * std::pow(std::cos(mu / 2.0), nm - 1), 0.0;
  return b;
}

BlockSet blocks_me_linear(const SpinScenario& s) {
  require(s, Preparation::ModeEntangled, Strategy::Linear, "blocks_me_linear");
  const double n = s.atoms_per_mode();
  BlockSet b;
  b.gamma_mm = local_covariance(n, s.mu, s.atoms - 2);
  b.c_mm = linear_commutator(n, s.mu, s.atoms - 1);
  if (s.modes > 1) b.gamma_mn = cross_covariance(n, s.mu, s.atoms - 2);
  return b;
}

BlockSet blocks_me_nonlocal_mai(const SpinScenario& s) {
  require(s, Preparation::ModeEntangled, Strategy::NonlocalMAI, "blocks_me_nonlocal_mai");
  const double n = s.atoms_per_mode();
  const int k = s.atoms - 2;
  const double mu = s.mu;
  const double ml = s.mu_mai;
  BlockSet b;
  b.gamma_mm = local_covariance(n, mu - ml, k);
  // Same bracket appears in the local and the cross y-y commutator.
  const double bracket =
      (std::pow(std::cos(mu - ml / 2.0), k) + std::pow(std::cos(ml / 2.0), k)) *
      std::sin(ml / 2.0);
  b.c_mm << n * (n - 1.0) / 4.0 * bracket,
      n / 2.0 * std::pow(std::cos((mu - ml) / 2.0), s.atoms - 1),
      -n / 2.0 * std::pow(std::cos(mu / 2.0), s.atoms - 1), 0.0;
  if (s.modes > 1) {
    b.gamma_mn = cross_covariance(n, mu - ml, k);
    b.c_mn(0, 0) = n * n / 4.0 * bracket;
  }
  return b;
}

BlockSet blocks_me_local_mai(const SpinScenario& s) {
  require(s, Preparation::ModeEntangled, Strategy::LocalMAI, "blocks_me_local_mai");
  const int nm = s.atoms_per_mode();
  const int m = s.modes;
  const double n = nm;
  const double mu = s.mu;
  const double ml = s.mu_mai;
  const double d = mu - ml;
  // Twist from the other M-1 modes that the local MAI cannot undo.
  const int others = (m - 1) * nm;

  BlockSet b;
  const double yy =
      n / 8.0 *
      (1.0 + n - scaled_pow(n - 1.0, std::cos(mu), others) * std::pow(std::cos(d), nm - 2));
  const double yz = scaled_pow(n * (n - 1.0) / 4.0, std::cos(d / 2.0), nm - 2) *
                    std::pow(std::cos(mu / 2.0), others) * std::sin(d / 2.0);
  b.gamma_mm = symmetric(yy, yz, n / 4.0);

  const double c_yy =
      scaled_pow(n * (n - 1.0) / 4.0, std::cos(mu - ml / 2.0), nm - 2) *
          std::pow(std::cos(mu), others) +
      scaled_pow(n * (n - 1.0) / 4.0, std::cos(ml / 2.0), nm - 2);
  b.c_mm << c_yy * std::sin(ml / 2.0),
      n / 2.0 * std::pow(std::cos(mu / 2.0), others) * std::pow(std::cos(d / 2.0), nm - 1),
      -n / 2.0 * std::pow(std::cos(mu / 2.0), s.atoms - 1), 0.0;

  if (m > 1) {
    const double cross_yy =
        n * n / 8.0 *
        (std::pow(std::cos(ml / 2.0), 2 * nm - 2) -
         std::pow(std::cos(mu), (m - 2) * nm) * std::pow(std::cos(mu - ml / 2.0), 2 * nm - 2));
    const double cross_yz = n * n / 4.0 * std::pow(std::cos(mu / 2.0), others - 1) *
                            std::pow(std::cos(d / 2.0), nm - 1) * std::sin(mu / 2.0);
    b.gamma_mn = symmetric(cross_yy, cross_yz, 0.0);
  }
  return b;
}

bool has_closed_form(Preparation prep, Strategy strategy) {
  return !(prep == Preparation::ModeSeparable && strategy == Strategy::NonlocalMAI);
}

BlockSet spin_blocks(const SpinScenario& s) {
  if (s.prep == Preparation::ModeSeparable) {
    switch (s.strategy) {
      case Strategy::Linear:
        return blocks_ms_linear(s);
      case Strategy::LocalMAI:
        return blocks_ms_local_mai(s);
      case Strategy::NonlocalMAI:
        throw InvalidScenario(
            "no closed form for nonlocal MAI on mode-separable states; use the oracle");
    }
  }
  switch (s.strategy) {
    case Strategy::Linear:
      return blocks_me_linear(s);
    case Strategy::LocalMAI:
      return blocks_me_local_mai(s);
    case Strategy::NonlocalMAI:
      return blocks_me_nonlocal_mai(s);
  }
  throw InvalidScenario("unknown strategy");
}

MomentData assemble_full(const BlockSet& b, int modes, double shot_noise) {
  const int dim = 2 * modes;
  MomentData md;
  md.gamma.resize(dim, dim);
  md.commutator.resize(dim, dim);
  for (int m = 0; m < modes; ++m) {
    for (int n = 0; n < modes; ++n) {
      md.gamma.block<2, 2>(2 * m, 2 * n) = (m == n) ? b.gamma_mm : b.gamma_mn;
      md.commutator.block<2, 2>(2 * m, 2 * n) = (m == n) ? b.c_mm : b.c_mn;
    }
  }
  md.f_sn = shot_noise * Eigen::MatrixXd::Identity(modes, modes);
  md.blocks = b;
  return md;
}

MomentData spin_moments(const SpinScenario& s) {
  return assemble_full(spin_blocks(s), s.modes, static_cast<double>(s.atoms_per_mode()));
}

}  // namespace maisense

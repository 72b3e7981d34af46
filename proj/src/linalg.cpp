#include "maisense/linalg.hpp"

#include "maisense/errors.hpp"

#include <algorithm>
#include <cmath>

namespace maisense {

Eigen::MatrixXd covariance_pinv(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& signal) {
  const Eigen::MatrixXd sym = 0.5 * (gamma + gamma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw SingularGamma("covariance eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const double lmax = lambda.cwiseAbs().maxCoeff();
  if (!(lmax > 0.0)) throw SingularGamma("covariance matrix is zero");

  const double cutoff = kPinvCutoff * lmax;
  const double signal_scale = std::max(1.0, signal.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) {
      inv(i) = 1.0 / lambda(i);
      continue;
    }
    // Dropped direction must carry no signal.
    const double leak = (v.col(i).transpose() * signal).cwiseAbs().maxCoeff();
    if (leak > 1e-8 * signal_scale)
      throw SingularGamma("covariance is singular along a direction carrying signal");
  }
  return v * inv.asDiagonal() * v.transpose();
}

Eigen::MatrixXd full_moment_matrix(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& c) {
  Eigen::MatrixXd m = c.transpose() * covariance_pinv(gamma, c) * c;
  return 0.5 * (m + m.transpose());
}

ExchangeBlocks exchange_inverse(const ExchangeBlocks& a, int modes) {
  const Eigen::Matrix2d plus = a.diag + (modes - 1) * a.off;
  const Eigen::Matrix2d plus_inv = plus.inverse();
  if (modes == 1) return {plus_inv, Eigen::Matrix2d::Zero()};
  const Eigen::Matrix2d minus_inv = (a.diag - a.off).inverse();
  const Eigen::Matrix2d off = (plus_inv - minus_inv) / modes;
  return {minus_inv + off, off};
}

Eigen::MatrixXd expand(const ExchangeBlocks& a, int modes) {
  Eigen::MatrixXd out(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m)
    for (int n = 0; n < modes; ++n) out.block<2, 2>(2 * m, 2 * n) = (m == n) ? a.diag : a.off;
  return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (a + a.transpose()));
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd orthonormalize_rows(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a * a.transpose());
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.minCoeff() <= 1e-14 * lambda.maxCoeff())
    throw DegenerateScenario("measurement rows are linearly dependent");
  const Eigen::VectorXd inv_root = lambda.cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_root.asDiagonal() * eig.eigenvectors().transpose() * a;
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (a + a.transpose()),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace maisense

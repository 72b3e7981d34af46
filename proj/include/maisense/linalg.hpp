#pragma once

#include <Eigen/Dense>

namespace maisense {

/// Relative eigenvalue cutoff for covariance pseudo-inversion.
inline constexpr double kPinvCutoff = 1e-12;

/// Symmetric pseudo-inverse of `gamma` (eigenvalues below
/// kPinvCutoff * lambda_max are dropped). Throws SingularGamma when the
/// columns of `signal` have weight in the dropped subspace, since that
/// would silently discard an infinitely precise measurement direction.
Eigen::MatrixXd covariance_pinv(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& signal);

/// C^T Gamma^+ C.
Eigen::MatrixXd full_moment_matrix(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& c);

/// Exchange-symmetric block matrix A = I (x) (diag - off) + J (x) off, i.e.
/// `diag` on every diagonal block and `off` everywhere else.
struct ExchangeBlocks {
  Eigen::Matrix2d diag;
  Eigen::Matrix2d off;
};

/// Inverse of an exchange-symmetric 2M x 2M matrix using the symmetric
/// sector diag + (M-1) off and the antisymmetric sector diag - off.
ExchangeBlocks exchange_inverse(const ExchangeBlocks& a, int modes);

/// Dense 2M x 2M form of an ExchangeBlocks matrix.
Eigen::MatrixXd expand(const ExchangeBlocks& a, int modes);

/// Symmetric square root of a positive semidefinite matrix.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a);

/// Orthonormalizes the rows of `a` while preserving their span: (A A^T)^{-1/2} A.
Eigen::MatrixXd orthonormalize_rows(const Eigen::MatrixXd& a);

/// Smallest eigenvalue of the symmetric part of `a`.
double min_eigenvalue(const Eigen::MatrixXd& a);

}  // namespace maisense

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>

namespace maisense {

enum class Preparation { ModeSeparable, ModeEntangled };
enum class Strategy { Linear, LocalMAI, NonlocalMAI };

std::string_view to_string(Preparation p);
std::string_view to_string(Strategy s);
Preparation parse_preparation(std::string_view text);  // "ms" | "me"
Strategy parse_strategy(std::string_view text);        // "linear" | "local-mai" | "nonlocal-mai"

/// Spin-1/2 ensemble split evenly over `modes` nodes, prepared by one-axis
/// twisting for time `mu` (= 2 chi t) and read out after an optional MAI
/// twist of duration `mu_mai` (= 2 chi tau).
struct SpinScenario {
  int atoms = 2;
  int modes = 1;
  Preparation prep = Preparation::ModeEntangled;
  double mu = 0.0;
  Strategy strategy = Strategy::Linear;
  double mu_mai = 0.0;

  int atoms_per_mode() const { return atoms / modes; }

  /// Checks N >= 2, M >= 1, N mod M == 0 and finite non-negative times.
  /// Pairing rules between prep and strategy are enforced by the closed forms.
  void validate() const;
};

/// The four 2x2 generating blocks of an exchange-symmetric 2M x 2M problem.
/// Rows/cols are ordered (S_y, S_z) for spins and (x, p) for quadratures.
/// Commutator blocks follow C_ij = -i<[X_i, L_j]>: row = measured operator,
/// column = linear generator direction.
struct BlockSet {
  Eigen::Matrix2d gamma_mm = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d gamma_mn = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d c_mm = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d c_mn = Eigen::Matrix2d::Zero();
};

/// Fully assembled moment data for M modes with two operators per mode.
struct MomentData {
  Eigen::MatrixXd gamma;       // 2M x 2M covariance of measured operators
  Eigen::MatrixXd commutator;  // 2M x 2M, row = measured op, col = generator
  Eigen::MatrixXd f_sn;        // M x M shot-noise Fisher matrix
  /// Present when the data was assembled from exchange-symmetric blocks.
  std::optional<BlockSet> blocks;

  int modes() const { return static_cast<int>(f_sn.rows()); }
};

}  // namespace maisense

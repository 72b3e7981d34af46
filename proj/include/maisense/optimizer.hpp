#pragma once

#include "maisense/fit.hpp"
#include "maisense/types.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace maisense {

/// Common local generator cos(phi) L_1 + sin(phi) L_2 on every mode.
struct GeneratorSpec {
  double phi = 0.0;
};

/// Equal-weight linear combination n with entries +-1/sqrt(M).
struct EstimationTarget {
  Eigen::VectorXd n;

  static EstimationTarget uniform(int modes);
  /// signs[m] > 0 -> +1/sqrt(M), otherwise -1/sqrt(M).
  static EstimationTarget from_signs(std::span<const int> signs);

  int modes() const { return static_cast<int>(n.size()); }
  void validate() const;
};

/// M x 2M generator matrix R. `orientation` (optional, entries +-1) flips the
/// generator of individual modes; RR^T = I either way.
Eigen::MatrixXd generator_matrix(const GeneratorSpec& g, int modes,
                                 std::span<const double> orientation = {});

/// Optimized moment matrix R (C^T Gamma^-1 C) R^T.
Eigen::MatrixXd moment_matrix(const MomentData& md, const GeneratorSpec& g,
                              std::span<const double> orientation = {});

/// Row-orthonormal M x 2M measurement matrix S spanning the rows of
/// R C^T Gamma^-1 (the Cauchy-Schwarz optimal readout).
Eigen::MatrixXd optimal_measurement(const MomentData& md, const GeneratorSpec& g,
                                    std::span<const double> orientation = {});

/// Moment matrix of the concrete readout X = S A evaluated directly:
/// (S C R^T)^T (S Gamma S^T)^-1 (S C R^T).
Eigen::MatrixXd moment_matrix_for_readout(const MomentData& md, const Eigen::MatrixXd& r,
                                          const Eigen::MatrixXd& s);

struct SqueezingResult {
  Eigen::MatrixXd xi2_matrix;  // optimal squeezing matrix
  Eigen::MatrixXd sigma;       // estimator covariance at nu = 1
  double xi2_inv = 0.0;
};

/// Squeezing matrix, covariance and xi^-2(n). Each mode's generator is
/// oriented along sign(n_m), which makes the result independent of the sign
/// pattern of n. Throws DegenerateScenario if the moment matrix is singular.
SqueezingResult squeezing_and_xi2(const MomentData& md, const GeneratorSpec& g,
                                  const EstimationTarget& t);

/// Same quantity via the exchange-symmetric two-sector reduction; O(1) in M.
double xi2_structured(const BlockSet& b, int modes, double shot_noise, double phi);

struct MaiRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// [0, max(2 mu, 16 pi / N_m)] clamped to [0, pi].
MaiRange default_mai_range(const SpinScenario& s);

struct SearchOptions {
  int phi_steps = 64;
  int mai_steps = 64;
  double tol = 1e-6;
  int max_rounds = 24;
};

struct AngleOptimum {
  double xi2_inv = 0.0;
  double phi = 0.0;
  double mu_mai = 0.0;
};

/// xi^-2 as a function of (phi, mu_mai).
using Xi2Evaluator = std::function<double(double phi, double mu_mai)>;

/// Grid over phi in [0, pi) x mu_mai in `mai` followed by alternating
/// golden-section refinement. Without a range only phi is searched and
/// mu_mai is reported as 0.
AngleOptimum maximize_angles(const Xi2Evaluator& f, std::optional<MaiRange> mai,
                             const SearchOptions& opt);

/// Closed-form evaluator for a spin scenario (mu_mai taken from the
/// argument, not from `s`). Degenerate points score 0.
Xi2Evaluator spin_evaluator(const SpinScenario& s);

struct SqueezingOutcome {
  double xi2_inv = 0.0;
  double gain_db = 0.0;
  double phi_opt = 0.0;
  double mu_mai_opt = 0.0;
  Eigen::MatrixXd s_matrix;
  Eigen::MatrixXd sigma;
};

/// Optimizes phi (and mu_mai for MAI strategies) at fixed preparation time.
SqueezingOutcome optimize_scenario(const SpinScenario& s, const EstimationTarget& t,
                                   std::optional<MaiRange> mai_range = std::nullopt,
                                   const SearchOptions& opt = {});

struct ScalingPoint {
  int atoms = 0;
  double xi2_inv = 0.0;
  double mu_opt = 0.0;
  double mu_mai_opt = 0.0;
  double phi_opt = 0.0;
};

/// Jointly optimizes preparation time, MAI time and angle for N atoms.
/// Preparation grid: `mu_steps` log-spaced points in
/// [0.1 N^{-2/3}, 10 N^{-1/2}], then golden refinement.
ScalingPoint optimize_joint(int atoms, int modes, Preparation prep, Strategy strategy,
                            const SearchOptions& opt = {}, int mu_steps = 64);

struct ScalingResult {
  std::vector<ScalingPoint> points;
  PowerLawFit fit;
};

ScalingResult scaling_sweep(std::span<const int> atoms, int modes, Preparation prep,
                            Strategy strategy, const EstimationTarget& t,
                            const SearchOptions& opt = {});

inline double to_db(double xi2_inv) { return 10.0 * std::log10(xi2_inv); }

}  // namespace maisense

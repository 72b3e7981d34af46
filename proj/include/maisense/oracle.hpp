#pragma once

#include "maisense/optimizer.hpp"
#include "maisense/types.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>

namespace maisense {

using cplx = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr long kOracleDimensionCap = 1000000;

/// Amplitudes over the product of per-mode maximal-J bases. Index digits are
/// mixed radix (N_m + 1) with mode 0 most significant; digit k <-> m_z = J - k.
struct CollectiveState {
  Eigen::VectorXcd amplitudes;
  int modes = 1;
  int per_mode = 1;

  long dim() const { return static_cast<long>(amplitudes.size()); }
};

/// (N_m + 1)^M, or DimensionCap if it exceeds kOracleDimensionCap.
long oracle_dimension(int modes, int per_mode);

/// Product of x-polarized coherent spin states.
CollectiveState coherent_x_state(int modes, int per_mode);

/// Which collective S_z enters the twisting generator.
struct OatScope {
  enum class Kind { AllModes, SingleMode, EachMode };
  Kind kind = Kind::AllModes;
  int mode = 0;  // SingleMode only

  static OatScope all() { return {Kind::AllModes, 0}; }
  static OatScope single(int m) { return {Kind::SingleMode, m}; }
  /// Product of independent per-mode twists, sum_m (S_z^(m))^2.
  static OatScope each() { return {Kind::EachMode, 0}; }
};

/// Diagonal of the twisting generator Q for the scope (e.g. (sum S_z)^2).
Eigen::VectorXd oat_generator_diagonal(int modes, int per_mode, const OatScope& scope);

/// exp(-i mu/2 Q) applied to the state.
CollectiveState evolve_oat(const CollectiveState& st, double mu, const OatScope& scope);

enum class Axis { X, Y, Z };

/// S_axis on one mode, identity elsewhere.
SparseOp observable_matrix(int modes, int per_mode, int mode, Axis axis);

/// Readout operator after the MAI twist. The interaction reverses the
/// preparation twist, U = exp(+i mu_mai/2 Q), and the result is U^dag ob U.
SparseOp mai_observable(const SparseOp& ob, double mu_mai, int modes, int per_mode,
                        const OatScope& scope);

/// Full 2M x 2M covariance and commutator built from the exact state.
/// Supports every preparation/strategy pair.
MomentData oracle_moments(const SpinScenario& s);

/// Blocks (0,0) and (0,1) of oracle_moments.
BlockSet oracle_blocks(const SpinScenario& s);

/// xi^-2 on oracle moments at s.mu_mai, maximized over phi.
double oracle_xi2(const SpinScenario& s, const EstimationTarget& t,
                  const SearchOptions& opt = {});

/// As optimize_scenario, on oracle moments. Works for mode-separable
/// preparations with nonlocal MAI, which have no closed form.
SqueezingOutcome oracle_optimize(const SpinScenario& s, const EstimationTarget& t,
                                 std::optional<MaiRange> mai_range = std::nullopt,
                                 const SearchOptions& opt = {});

}  // namespace maisense

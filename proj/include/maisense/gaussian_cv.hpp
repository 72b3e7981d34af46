#pragma once

#include "maisense/optimizer.hpp"
#include "maisense/types.hpp"

namespace maisense {

/// Two-mode squeezed vacuum with squeezing r (real, phase 0), optional MAI
/// squeezing r_mai (two-mode for NonlocalMAI, single-mode for LocalMAI) and
/// additive Gaussian detection noise of standard deviation sigma.
struct GaussianScenario {
  double r = 0.0;
  Strategy strategy = Strategy::Linear;
  double r_mai = 0.0;
  double sigma = 0.0;

  void validate() const;
};

/// 4x4 moment data over (x_A, p_A, x_B, p_B). Detection noise adds sigma^2
/// to every variance; F_SN = 2 I (the vacuum moment matrix).
MomentData cv_matrices(const GaussianScenario& gs);

/// xi^-2 from the matrix pipeline with the common quadrature angle optimized.
SqueezingOutcome cv_xi2_matrix(const GaussianScenario& gs, const EstimationTarget& t,
                               const SearchOptions& opt = {});

/// 1 / (e^{-2r} + 2 k sigma^2) with k = 1 (Linear) or e^{-2 r_mai} (MAI).
double cv_xi2_closed(const GaussianScenario& gs);

/// xi^-2_L / xi^-2_MAI = (e^{-2r} + 2 sigma^2 e^{-2 r_mai}) / (e^{-2r} + 2 sigma^2).
double noise_ratio(double r, double r_mai, double sigma);

}  // namespace maisense

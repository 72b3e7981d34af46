#pragma once

#include "maisense/types.hpp"

namespace maisense {

// Closed-form covariance and commutator blocks for one-axis-twisted spin
// states. Each function throws InvalidScenario when called with the wrong
// preparation/strategy pair.

BlockSet blocks_ms_linear(const SpinScenario& s);
BlockSet blocks_ms_local_mai(const SpinScenario& s);
BlockSet blocks_me_linear(const SpinScenario& s);
BlockSet blocks_me_nonlocal_mai(const SpinScenario& s);
BlockSet blocks_me_local_mai(const SpinScenario& s);

/// Dispatches on (prep, strategy). Mode-separable + nonlocal MAI has no
/// closed form and throws InvalidScenario; use the oracle for it.
BlockSet spin_blocks(const SpinScenario& s);

/// True when spin_blocks() can evaluate the scenario.
bool has_closed_form(Preparation prep, Strategy strategy);

/// Lays the blocks out as 2M x 2M matrices: gamma_mm / c_mm on the block
/// diagonal, gamma_mn / c_mn everywhere else; F_SN = shot_noise * I_M.
MomentData assemble_full(const BlockSet& b, int modes, double shot_noise);

/// assemble_full(spin_blocks(s), M, N/M).
MomentData spin_moments(const SpinScenario& s);

}  // namespace maisense

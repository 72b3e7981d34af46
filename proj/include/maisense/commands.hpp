#pragma once

#include "maisense/config.hpp"
#include "maisense/table.hpp"

#include <string>

namespace maisense {

/// One row per mu: for every requested M and strategy, the optimized gain
/// (dB), xi^-2 and MAI time.
Table cmd_spin_gain(const SweepConfig& cfg);

/// Long format: one row per (strategy, N) with the joint optimum, plus the
/// strategy's log-log slope, intercept and RMS residual repeated per row.
Table cmd_spin_scaling(const SweepConfig& cfg);

/// One row per sigma (or r): gain and xi^-2 for each strategy.
Table cmd_cv_gain(const SweepConfig& cfg);

/// Runs the table command selected by cfg.command.
Table run_table_command(const SweepConfig& cfg);

/// CSV or pretty JSON (with the resolved config) per cfg.format.
std::string render(const Table& t, const SweepConfig& cfg);

/// Column tag of a strategy, e.g. "nonlocal_mai".
std::string column_tag(Strategy s);

}  // namespace maisense

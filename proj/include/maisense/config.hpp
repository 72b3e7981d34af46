#pragma once

#include "maisense/optimizer.hpp"
#include "maisense/types.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maisense {

enum class Command { SpinGain, SpinScaling, CvGain, Validate };
enum class Format { Csv, Json };
enum class SweepAxis { Sigma, R };

std::string_view to_string(Command c);
Command parse_command(std::string_view text);

/// Flat key -> value settings; keys are flag names without dashes
/// ("mu-min", "N", ...). Lists are comma separated.
using Settings = std::map<std::string, std::string>;

struct SweepConfig {
  Command command = Command::SpinGain;
  std::vector<int> atoms;
  std::vector<int> modes;
  Preparation prep = Preparation::ModeEntangled;
  std::vector<Strategy> strategies;
  double mu_min = 0.0;
  double mu_max = 0.5;
  int mu_steps = 64;
  std::optional<MaiRange> mai_range;
  int phi_steps = 64;
  int mai_steps = 64;
  SweepAxis sweep_axis = SweepAxis::Sigma;
  double r = 0.5;
  std::optional<double> r_mai;  // defaults to r
  double sigma = 0.0;           // fixed noise for the r sweep
  double sigma_min = 0.0;
  double sigma_max = 1.0;
  int sigma_steps = 64;
  double r_min = 0.0;
  double r_max = 1.0;
  int r_steps = 64;
  double grid_step = 0.1;  // validate: mu / mu_mai spacing
  std::string out;
  Format format = Format::Csv;
  std::string preset;
  int threads = 1;

  SearchOptions search() const;
};

/// Built-in defaults for a subcommand.
Settings default_settings(Command c);

/// fig2b, fig2c or fig3. Throws ConfigError for unknown names or when the
/// preset belongs to another subcommand.
Settings preset_settings(const std::string& name, Command c);

/// JSON object or key=value lines ('#' starts a comment).
Settings read_config_file(const std::string& path);
Settings parse_config_text(const std::string& text);

/// defaults < preset < config file < MAISENSE_THREADS < flags. The preset
/// and config path may themselves come from the file or the flags.
SweepConfig resolve_config(Command c, const Settings& file, const Settings& flags);

/// Parses fully merged settings. Throws ConfigError on bad or unknown keys.
SweepConfig parse_settings(Command c, const Settings& merged);

/// Resolved configuration for output provenance (thread count omitted since
/// it never changes results).
nlohmann::json config_json(const SweepConfig& cfg);

}  // namespace maisense

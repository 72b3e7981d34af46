#include "maisense/commands.hpp"
#include "maisense/config.hpp"
#include "maisense/errors.hpp"
#include "maisense/validate.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace maisense;

namespace {

struct FlagSpec {
  const char* name;
  const char* help;
};

const FlagSpec kCommon[] = {
    {"out", "output path (default stdout)"},
    {"format", "csv | json"},
    {"preset", "fig2b | fig2c | fig3"},
    {"threads", "worker threads (fallback: MAISENSE_THREADS)"},
    {"config", "config file (JSON or key=value)"},
};

const FlagSpec kSpin[] = {
    {"N", "total atom number (comma list for spin-scaling)"},
    {"M", "mode number (comma list for spin-gain)"},
    {"prep", "ms | me"},
    {"strategy", "linear | local-mai | nonlocal-mai | all (comma list allowed)"},
    {"mai-range", "LO,HI range of the MAI time"},
    {"phi-steps", "generator-angle grid size"},
    {"mai-steps", "MAI-time grid size"},
};

const FlagSpec kMu[] = {
    {"mu-min", "smallest preparation time"},
    {"mu-max", "largest preparation time"},
    {"mu-steps", "number of preparation times"},
};

const FlagSpec kCv[] = {
    {"strategy", "linear | local-mai | nonlocal-mai | all (comma list allowed)"},
    {"sweep-axis", "sigma | r"},
    {"r", "two-mode squeezing (sigma sweep)"},
    {"r-mai", "MAI squeezing (default: r)"},
    {"sigma", "detection noise (r sweep)"},
    {"sigma-min", ""},
    {"sigma-max", ""},
    {"sigma-steps", ""},
    {"r-min", ""},
    {"r-max", ""},
    {"r-steps", ""},
    {"phi-steps", "generator-angle grid size"},
};

const FlagSpec kValidate[] = {
    {"N", "atom numbers to check against the oracle (<= 12)"},
    {"grid-step", "spacing of the mu / mu_mai grid"},
};

struct Sub {
  CLI::App* app;
  Command command;
  std::map<std::string, std::string> values;
};

template <std::size_t K>
void add_flags(Sub& sub, const FlagSpec (&flags)[K]) {
  for (const auto& f : flags) sub.app->add_option("--" + std::string(f.name), sub.values[f.name], f.help);
}

int run(const Sub& sub) {
  Settings flags;
  for (const auto& [name, value] : sub.values)
    if (sub.app->count("--" + name) > 0) flags[name] = value;
  Settings file;
  if (auto it = flags.find("config"); it != flags.end()) file = read_config_file(it->second);
  const SweepConfig cfg = resolve_config(sub.command, file, flags);

  if (cfg.command == Command::Validate) {
    const ValidationReport rep = cmd_validate(cfg);
    write_text(rep.to_json(cfg).dump(2) + "\n", cfg.out);
    for (const auto& c : rep.checks)
      if (!c.passed)
        std::cerr << "FAIL " << c.name << ": deviation " << c.max_deviation << " > " << c.threshold
                  << "\n";
    return rep.passed() ? 0 : 1;
  }
  write_text(render(run_table_command(cfg), cfg), cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimized multiparameter squeezing for distributed sensing with MAI readout"};
  app.require_subcommand(1);

  std::vector<Sub> subs;
  subs.reserve(4);
  subs.push_back({app.add_subcommand("spin-gain", "gain vs preparation time (spin OAT states)"),
                  Command::SpinGain, {}});
  add_flags(subs.back(), kSpin);
  add_flags(subs.back(), kMu);
  subs.push_back({app.add_subcommand("spin-scaling", "optimized xi^-2 vs N with power-law fit"),
                  Command::SpinScaling, {}});
  add_flags(subs.back(), kSpin);
  subs.push_back({app.add_subcommand("cv-gain", "two-mode squeezed vacuum gain vs noise or r"),
                  Command::CvGain, {}});
  add_flags(subs.back(), kCv);
  subs.push_back({app.add_subcommand("validate", "oracle equivalence and property suites"),
                  Command::Validate, {}});
  add_flags(subs.back(), kValidate);
  for (auto& s : subs) add_flags(s, kCommon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& s : subs)
      if (s.app->parsed()) return run(s);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidScenario& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const EmptyRange& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

#include "maisense/config.hpp"

#include "maisense/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace maisense {
namespace {

const std::set<std::string> kKeys = {
    "N",         "M",         "prep",        "strategy", "mu-min",    "mu-max",
    "mu-steps",  "mai-range", "phi-steps",   "mai-steps", "sweep-axis", "r",
    "r-mai",     "sigma",     "sigma-min",   "sigma-max", "sigma-steps", "r-min",
    "r-max",     "r-steps",   "grid-step",   "out",      "format",    "preset",
    "threads",   "config"};

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

std::string normalize_key(std::string k) {
  k = trim(k);
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  for (char& c : k)
    if (c == '_') c = '-';
  if (k == "n") k = "N";
  if (k == "m") k = "M";
  return k;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long i = std::stol(v, &pos);
    if (pos != v.size() || i < std::numeric_limits<int>::min() ||
        i > std::numeric_limits<int>::max())
      throw std::invalid_argument(v);
    return static_cast<int>(i);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v)) out.push_back(to_int(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

void merge(Settings& into, const Settings& from) {
  for (const auto& [k, v] : from) into[k] = v;
}

std::string pi_text() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", std::numbers::pi);
  return buf;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::SpinGain: return "spin-gain";
    case Command::SpinScaling: return "spin-scaling";
    case Command::CvGain: return "cv-gain";
    case Command::Validate: return "validate";
  }
  return "?";
}

Command parse_command(std::string_view text) {
  for (Command c : {Command::SpinGain, Command::SpinScaling, Command::CvGain, Command::Validate})
    if (text == to_string(c)) return c;
  throw ConfigError("unknown subcommand: " + std::string(text));
}

SearchOptions SweepConfig::search() const {
  SearchOptions o;
  o.phi_steps = phi_steps;
  o.mai_steps = mai_steps;
  return o;
}

Settings default_settings(Command c) {
  Settings s{{"prep", "me"},      {"strategy", "all"}, {"mu-min", "0"},      {"mu-max", "0.5"},
             {"mu-steps", "64"},  {"phi-steps", "64"}, {"mai-steps", "64"},  {"sweep-axis", "sigma"},
             {"r", "0.5"},        {"sigma", "0"},      {"sigma-min", "0"},   {"sigma-max", "1"},
             {"sigma-steps", "64"}, {"r-min", "0"},    {"r-max", "1"},       {"r-steps", "64"},
             {"grid-step", "0.1"}, {"format", "csv"},  {"threads", "1"}};
  switch (c) {
    case Command::SpinGain:
      s["N"] = "100";
      s["M"] = "2";
      break;
    case Command::SpinScaling:
      s["N"] = "64,128,256,512,1024,2048,4096";
      s["M"] = "2";
      break;
    case Command::Validate:
      s["N"] = "4,6,8,12";
      break;
    case Command::CvGain:
      break;
  }
  return s;
}

Settings preset_settings(const std::string& name, Command c) {
  Command owner;
  Settings s;
  if (name == "fig2b") {
    owner = Command::SpinGain;
    s = {{"N", "100"},          {"M", "2,4,10,20,100"}, {"prep", "me"},
         {"strategy", "all"},   {"mu-min", "0"},        {"mu-max", "0.5"},
         {"mu-steps", "64"},    {"mai-range", "0," + pi_text()},
         {"mai-steps", "256"}};
  } else if (name == "fig2c") {
    owner = Command::SpinScaling;
    s = {{"N", "64,128,256,512,1024,2048,4096"}, {"M", "2"}, {"prep", "me"}, {"strategy", "all"}};
  } else if (name == "fig3") {
    owner = Command::CvGain;
    s = {{"r", "0.5"},       {"sweep-axis", "sigma"}, {"sigma-min", "0"},
         {"sigma-max", "1"}, {"sigma-steps", "64"},   {"strategy", "all"}};
  } else {
    throw ConfigError("unknown preset: " + name + " (expected fig2b, fig2c or fig3)");
  }
  if (owner != c)
    throw ConfigError("preset " + name + " belongs to " + std::string(to_string(owner)));
  return s;
}

Settings parse_config_text(const std::string& text) {
  Settings s;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [k, v] : j.items()) {
      std::string value;
      if (v.is_string()) {
        value = v.get<std::string>();
      } else if (v.is_array()) {
        for (const auto& item : v) {
          if (!value.empty()) value += ",";
          value += item.is_string() ? item.get<std::string>() : item.dump();
        }
      } else if (v.is_number() || v.is_boolean()) {
        value = v.dump();
      } else {
        throw ConfigError("config JSON: unsupported value for " + k);
      }
      s[normalize_key(k)] = value;
    }
    return s;
  }
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    s[normalize_key(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return s;
}

Settings read_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

SweepConfig resolve_config(Command c, const Settings& file, const Settings& flags) {
  Settings merged = default_settings(c);
  std::string preset;
  if (auto it = file.find("preset"); it != file.end()) preset = it->second;
  if (auto it = flags.find("preset"); it != flags.end()) preset = it->second;
  if (!preset.empty()) merge(merged, preset_settings(preset, c));
  merge(merged, file);
  if (const char* env = std::getenv("MAISENSE_THREADS"); env && *env) merged["threads"] = env;
  merge(merged, flags);
  merged["preset"] = preset;
  merged.erase("config");
  return parse_settings(c, merged);
}

SweepConfig parse_settings(Command c, const Settings& merged) {
  for (const auto& [k, v] : merged)
    if (!kKeys.count(k)) throw ConfigError("unknown setting: " + k);
  auto get = [&](const std::string& k) -> std::string {
    auto it = merged.find(k);
    return it == merged.end() ? std::string() : it->second;
  };
  auto has = [&](const std::string& k) { return !get(k).empty(); };

  SweepConfig cfg;
  cfg.command = c;
  try {
    if (has("N")) cfg.atoms = to_ints("N", get("N"));
    if (has("M")) cfg.modes = to_ints("M", get("M"));
    cfg.prep = parse_preparation(get("prep"));
    const std::string strat = get("strategy");
    if (strat == "all") {
      cfg.strategies = {Strategy::Linear, Strategy::NonlocalMAI, Strategy::LocalMAI};
      // No closed form exists for nonlocal MAI on separable preparations.
      if (c != Command::CvGain && cfg.prep == Preparation::ModeSeparable)
        cfg.strategies = {Strategy::Linear, Strategy::LocalMAI};
    } else {
      for (const auto& item : split(strat)) cfg.strategies.push_back(parse_strategy(item));
    }
  } catch (const InvalidScenario& e) {
    throw ConfigError(e.what());
  }
  cfg.mu_min = to_double("mu-min", get("mu-min"));
  cfg.mu_max = to_double("mu-max", get("mu-max"));
  cfg.mu_steps = to_int("mu-steps", get("mu-steps"));
  if (has("mai-range")) {
    const auto parts = split(get("mai-range"));
    if (parts.size() != 2) throw ConfigError("mai-range: expected LO,HI");
    cfg.mai_range = MaiRange{to_double("mai-range", parts[0]), to_double("mai-range", parts[1])};
    if (!(cfg.mai_range->lo >= 0.0 && cfg.mai_range->hi > cfg.mai_range->lo))
      throw ConfigError("mai-range: need 0 <= LO < HI");
  }
  cfg.phi_steps = to_int("phi-steps", get("phi-steps"));
  cfg.mai_steps = to_int("mai-steps", get("mai-steps"));
  const std::string axis = get("sweep-axis");
  if (axis == "sigma") cfg.sweep_axis = SweepAxis::Sigma;
  else if (axis == "r") cfg.sweep_axis = SweepAxis::R;
  else throw ConfigError("sweep-axis: expected sigma or r");
  cfg.r = to_double("r", get("r"));
  if (has("r-mai")) cfg.r_mai = to_double("r-mai", get("r-mai"));
  cfg.sigma = to_double("sigma", get("sigma"));
  cfg.sigma_min = to_double("sigma-min", get("sigma-min"));
  cfg.sigma_max = to_double("sigma-max", get("sigma-max"));
  cfg.sigma_steps = to_int("sigma-steps", get("sigma-steps"));
  cfg.r_min = to_double("r-min", get("r-min"));
  cfg.r_max = to_double("r-max", get("r-max"));
  cfg.r_steps = to_int("r-steps", get("r-steps"));
  cfg.grid_step = to_double("grid-step", get("grid-step"));
  cfg.out = get("out");
  const std::string fmt = get("format");
  if (fmt == "csv") cfg.format = Format::Csv;
  else if (fmt == "json") cfg.format = Format::Json;
  else throw ConfigError("format: expected csv or json");
  cfg.preset = get("preset");
  cfg.threads = to_int("threads", get("threads"));

  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.phi_steps < 2 || cfg.mai_steps < 2) throw ConfigError("search grids need >= 2 steps");
  auto axis_ok = [](const char* name, double lo, double hi, int steps) {
    if (steps < 2) throw ConfigError(std::string(name) + "-steps must be >= 2");
    if (!(lo < hi)) throw ConfigError(std::string(name) + "-min must be < " + name + "-max");
    if (lo < 0.0) throw ConfigError(std::string(name) + "-min must be >= 0");
  };
  switch (c) {
    case Command::SpinGain:
    case Command::SpinScaling:
      if (cfg.atoms.empty() || cfg.modes.empty()) throw ConfigError("N and M are required");
      if (c == Command::SpinGain) {
        if (cfg.atoms.size() != 1) throw ConfigError("spin-gain takes a single N");
        axis_ok("mu", cfg.mu_min, cfg.mu_max, cfg.mu_steps);
      } else {
        if (cfg.modes.size() != 1) throw ConfigError("spin-scaling takes a single M");
        if (cfg.atoms.size() < 3) throw ConfigError("spin-scaling needs at least 3 values of N");
      }
      for (int n : cfg.atoms)
        for (int m : cfg.modes) {
          if (n < 2 || m < 1) throw ConfigError("need N >= 2 and M >= 1");
          if (n % m != 0)
            throw ConfigError("N=" + std::to_string(n) + " is not divisible by M=" +
                              std::to_string(m));
        }
      for (Strategy s : cfg.strategies)
        if (s == Strategy::NonlocalMAI && cfg.prep == Preparation::ModeSeparable)
          throw ConfigError("nonlocal-mai requires --prep me");
      break;
    case Command::CvGain:
      if (cfg.r < 0.0 || cfg.sigma < 0.0 || (cfg.r_mai && *cfg.r_mai < 0.0))
        throw ConfigError("r, r-mai and sigma must be >= 0");
      if (cfg.sweep_axis == SweepAxis::Sigma)
        axis_ok("sigma", cfg.sigma_min, cfg.sigma_max, cfg.sigma_steps);
      else
        axis_ok("r", cfg.r_min, cfg.r_max, cfg.r_steps);
      break;
    case Command::Validate:
      for (int n : cfg.atoms)
        if (n < 2 || n > 12) throw ConfigError("validate supports 2 <= N <= 12");
      if (!(cfg.grid_step > 0.0)) throw ConfigError("grid-step must be > 0");
      break;
  }
  return cfg;
}

nlohmann::json config_json(const SweepConfig& cfg) {
  nlohmann::json j;
  j["command"] = std::string(to_string(cfg.command));
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  std::vector<std::string> strategies;
  for (Strategy s : cfg.strategies) strategies.emplace_back(to_string(s));
  switch (cfg.command) {
    case Command::SpinGain:
      j["N"] = cfg.atoms.front();
      j["M"] = cfg.modes;
      j["prep"] = std::string(to_string(cfg.prep));
      j["strategy"] = strategies;
      j["mu_min"] = cfg.mu_min;
      j["mu_max"] = cfg.mu_max;
      j["mu_steps"] = cfg.mu_steps;
      if (cfg.mai_range) j["mai_range"] = {cfg.mai_range->lo, cfg.mai_range->hi};
      else j["mai_range"] = "default";
      j["phi_steps"] = cfg.phi_steps;
      j["mai_steps"] = cfg.mai_steps;
      break;
    case Command::SpinScaling:
      j["N"] = cfg.atoms;
      j["M"] = cfg.modes.front();
      j["prep"] = std::string(to_string(cfg.prep));
      j["strategy"] = strategies;
      j["phi_steps"] = cfg.phi_steps;
      j["mai_steps"] = cfg.mai_steps;
      break;
    case Command::CvGain:
      j["strategy"] = strategies;
      j["sweep_axis"] = cfg.sweep_axis == SweepAxis::Sigma ? "sigma" : "r";
      if (cfg.sweep_axis == SweepAxis::Sigma) {
        j["r"] = cfg.r;
        j["sigma_min"] = cfg.sigma_min;
        j["sigma_max"] = cfg.sigma_max;
        j["sigma_steps"] = cfg.sigma_steps;
      } else {
        j["sigma"] = cfg.sigma;
        j["r_min"] = cfg.r_min;
        j["r_max"] = cfg.r_max;
        j["r_steps"] = cfg.r_steps;
      }
      if (cfg.r_mai) j["r_mai"] = *cfg.r_mai;
      else j["r_mai"] = "r";
      j["phi_steps"] = cfg.phi_steps;
      break;
    case Command::Validate:
      j["N"] = cfg.atoms;
      j["grid_step"] = cfg.grid_step;
      break;
  }
  return j;
}

}  // namespace maisense

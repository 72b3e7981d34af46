#include "maisense/commands.hpp"

#include "maisense/errors.hpp"
#include "maisense/gaussian_cv.hpp"
#include "maisense/optimizer.hpp"
#include "maisense/parallel.hpp"
#include "maisense/search.hpp"

namespace maisense {
namespace {

struct GainCell {
  double xi2 = 0.0;
  double mu_mai = 0.0;
};

}  // namespace

std::string column_tag(Strategy s) {
  std::string tag(to_string(s));
  for (char& c : tag)
    if (c == '-') c = '_';
  return tag;
}

Table cmd_spin_gain(const SweepConfig& cfg) {
  const int atoms = cfg.atoms.front();
  const std::vector<double> mus = linspace(cfg.mu_min, cfg.mu_max, cfg.mu_steps);
  const std::size_t per_row = cfg.modes.size() * cfg.strategies.size();
  const SearchOptions opt = cfg.search();

  const auto cells = parallel_map<GainCell>(mus.size() * per_row, cfg.threads, [&](std::size_t i) {
    const std::size_t row = i / per_row;
    const std::size_t m = (i % per_row) / cfg.strategies.size();
    const Strategy st = cfg.strategies[i % cfg.strategies.size()];
    const SpinScenario s{atoms, cfg.modes[m], cfg.prep, mus[row], st, 0.0};
    const SqueezingOutcome o =
        optimize_scenario(s, EstimationTarget::uniform(s.modes), cfg.mai_range, opt);
    return GainCell{o.xi2_inv, o.mu_mai_opt};
  });

  Table t;
  t.columns.push_back("mu");
  for (int m : cfg.modes)
    for (Strategy st : cfg.strategies) {
      const std::string tag = "M" + std::to_string(m) + "_" + column_tag(st);
      t.columns.push_back(tag + "_gain_db");
      t.columns.push_back(tag + "_xi2");
      t.columns.push_back(tag + "_mu_mai");
    }
  for (std::size_t row = 0; row < mus.size(); ++row) {
    std::vector<Cell> r{mus[row]};
    for (std::size_t k = 0; k < per_row; ++k) {
      const GainCell& c = cells[row * per_row + k];
      r.emplace_back(to_db(c.xi2));
      r.emplace_back(c.xi2);
      r.emplace_back(c.mu_mai);
    }
    t.add_row(std::move(r));
  }
  return t;
}

Table cmd_spin_scaling(const SweepConfig& cfg) {
  const int modes = cfg.modes.front();
  const std::size_t n_atoms = cfg.atoms.size();
  const SearchOptions opt = cfg.search();
  const auto points =
      parallel_map<ScalingPoint>(cfg.strategies.size() * n_atoms, cfg.threads, [&](std::size_t i) {
        return optimize_joint(cfg.atoms[i % n_atoms], modes, cfg.prep,
                              cfg.strategies[i / n_atoms], opt);
      });

  Table t;
  t.columns = {"strategy", "N",      "xi2",   "gain_db",   "mu_opt",
               "mu_mai_opt", "phi_opt", "slope", "intercept", "residual"};
  for (std::size_t k = 0; k < cfg.strategies.size(); ++k) {
    std::vector<double> x, y;
    for (std::size_t j = 0; j < n_atoms; ++j) {
      x.push_back(points[k * n_atoms + j].atoms);
      y.push_back(points[k * n_atoms + j].xi2_inv);
    }
    const PowerLawFit fit = fit_power_law(x, y);
    for (std::size_t j = 0; j < n_atoms; ++j) {
      const ScalingPoint& p = points[k * n_atoms + j];
      t.add_row({std::string(to_string(cfg.strategies[k])), static_cast<long>(p.atoms), p.xi2_inv,
                 to_db(p.xi2_inv), p.mu_opt, p.mu_mai_opt, p.phi_opt, fit.slope, fit.intercept,
                 fit.rms_residual});
    }
  }
  return t;
}

Table cmd_cv_gain(const SweepConfig& cfg) {
  const bool by_sigma = cfg.sweep_axis == SweepAxis::Sigma;
  const std::vector<double> axis = by_sigma
                                       ? linspace(cfg.sigma_min, cfg.sigma_max, cfg.sigma_steps)
                                       : linspace(cfg.r_min, cfg.r_max, cfg.r_steps);
  const std::size_t ns = cfg.strategies.size();
  const SearchOptions opt = cfg.search();
  const auto xi2 = parallel_map<double>(axis.size() * ns, cfg.threads, [&](std::size_t i) {
    GaussianScenario g;
    g.strategy = cfg.strategies[i % ns];
    g.r = by_sigma ? cfg.r : axis[i / ns];
    g.sigma = by_sigma ? axis[i / ns] : cfg.sigma;
    g.r_mai = cfg.r_mai ? *cfg.r_mai : g.r;
    return cv_xi2_matrix(g, EstimationTarget::uniform(2), opt).xi2_inv;
  });

  Table t;
  t.columns.push_back(by_sigma ? "sigma" : "r");
  for (Strategy st : cfg.strategies) {
    t.columns.push_back(column_tag(st) + "_gain_db");
    t.columns.push_back(column_tag(st) + "_xi2");
  }
  for (std::size_t row = 0; row < axis.size(); ++row) {
    std::vector<Cell> r{axis[row]};
    for (std::size_t k = 0; k < ns; ++k) {
      r.emplace_back(to_db(xi2[row * ns + k]));
      r.emplace_back(xi2[row * ns + k]);
    }
    t.add_row(std::move(r));
  }
  return t;
}

Table run_table_command(const SweepConfig& cfg) {
  switch (cfg.command) {
    case Command::SpinGain: return cmd_spin_gain(cfg);
    case Command::SpinScaling: return cmd_spin_scaling(cfg);
    case Command::CvGain: return cmd_cv_gain(cfg);
    case Command::Validate: break;
  }
  throw ConfigError("validate does not produce a table");
}

std::string render(const Table& t, const SweepConfig& cfg) {
  if (cfg.format == Format::Csv) return to_csv(t);
  return table_json(t, config_json(cfg)).dump(2) + "\n";
}

}  // namespace maisense

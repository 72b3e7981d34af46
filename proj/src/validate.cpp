#include "maisense/validate.hpp"

#include "maisense/errors.hpp"
#include "maisense/gaussian_cv.hpp"
#include "maisense/linalg.hpp"
#include "maisense/optimizer.hpp"
#include "maisense/oracle.hpp"
#include "maisense/spin_moments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace maisense {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double block_deviation(const BlockSet& a, const BlockSet& b) {
  return std::max({(a.gamma_mm - b.gamma_mm).cwiseAbs().maxCoeff(),
                   (a.gamma_mn - b.gamma_mn).cwiseAbs().maxCoeff(),
                   (a.c_mm - b.c_mm).cwiseAbs().maxCoeff(),
                   (a.c_mn - b.c_mn).cwiseAbs().maxCoeff()});
}

std::vector<double> time_grid(double step) {
  std::vector<double> out;
  for (int k = 0; k * step <= 3.1 + 1e-9; ++k) out.push_back(k * step);
  return out;
}

std::vector<EstimationTarget> all_sign_patterns(int modes) {
  std::vector<EstimationTarget> out;
  for (int mask = 0; mask < (1 << modes); ++mask) {
    std::vector<int> signs(modes);
    for (int m = 0; m < modes; ++m) signs[m] = (mask >> m) & 1 ? -1 : 1;
    out.push_back(EstimationTarget::from_signs(signs));
  }
  return out;
}

const std::pair<Preparation, Strategy> kClosedForms[] = {
    {Preparation::ModeSeparable, Strategy::Linear},
    {Preparation::ModeSeparable, Strategy::LocalMAI},
    {Preparation::ModeEntangled, Strategy::Linear},
    {Preparation::ModeEntangled, Strategy::NonlocalMAI},
    {Preparation::ModeEntangled, Strategy::LocalMAI},
};

std::string pair_name(Preparation p, Strategy s) {
  return std::string(to_string(p)) + "/" + std::string(to_string(s));
}

Eigen::MatrixXd random_orthonormal_rows(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(cols, rows);
  for (int i = 0; i < a.size(); ++i) a(i) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, rows);
  return q.transpose();
}

}  // namespace

nlohmann::json CheckResult::to_json() const {
  return {{"name", name},           {"measure", measure}, {"max_deviation", max_deviation},
          {"threshold", threshold}, {"cases", cases},     {"passed", passed}};
}

std::vector<CheckResult> check_oracle_equivalence(std::span<const int> atoms, double step) {
  const std::vector<double> grid = time_grid(step);
  std::vector<CheckResult> out;
  for (const auto& [prep, strat] : kClosedForms) {
    CheckResult r{"oracle_equivalence " + pair_name(prep, strat), "abs", 0.0, 1e-9};
    for (int n : atoms)
      for (int m = 1; m <= n; ++m) {
        if (n % m != 0) continue;
        for (double mu : grid)
          for (double ma : grid) {
            if (strat == Strategy::Linear && ma > 0.0) break;
            const SpinScenario s{n, m, prep, mu, strat, ma};
            r.max_deviation = std::max(r.max_deviation, block_deviation(spin_blocks(s), oracle_blocks(s)));
            ++r.cases;
          }
      }
    r.passed = r.max_deviation <= r.threshold;
    out.push_back(r);
  }
  return out;
}

CheckResult check_sign_invariance() {
  CheckResult r{"sign_invariance", "rel", 0.0, 1e-10};
  for (int m = 1; m <= 4; ++m)
    for (const auto& [prep, strat] : kClosedForms)
      for (double mu : {0.05, 0.2, 0.7})
        for (double ma : {0.0, 0.1, 0.4})
          for (double phi : {0.3, 1.2, 2.5}) {
            const MomentData md = spin_moments({12, m, prep, mu, strat, ma});
            const auto targets = all_sign_patterns(m);
            double ref = 0.0;
            try {
              ref = squeezing_and_xi2(md, {phi}, targets.front()).xi2_inv;
            } catch (const DegenerateScenario&) {
              continue;
            }
            for (const auto& t : targets) {
              r.max_deviation = std::max(r.max_deviation, rel(squeezing_and_xi2(md, {phi}, t).xi2_inv, ref));
              ++r.cases;
            }
          }
  r.passed = r.max_deviation <= r.threshold;
  return r;
}

std::vector<CheckResult> check_cauchy_schwarz(int trials, int projections, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CheckResult sat{"cauchy_schwarz_saturation", "rel", 0.0, 1e-9};
  CheckResult dom{"cauchy_schwarz_dominance", "abs", 0.0, 1e-9};
  for (int trial = 0; trial < trials; ++trial) {
    const int m = 2 + trial % 2;
    const int k = 2 * m;
    Eigen::MatrixXd a(k, k), c(k, k);
    for (int i = 0; i < a.size(); ++i) a(i) = g(rng);
    for (int i = 0; i < c.size(); ++i) c(i) = g(rng);
    MomentData md;
    md.gamma = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(k, k);
    md.commutator = c;
    md.f_sn = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd rr = random_orthonormal_rows(m, k, rng);

    const Eigen::MatrixXd best = rr * full_moment_matrix(md.gamma, c) * rr.transpose();
    const Eigen::MatrixXd s =
        orthonormalize_rows(rr * c.transpose() * covariance_pinv(md.gamma, c));
    const Eigen::MatrixXd ms = moment_matrix_for_readout(md, rr, s);
    sat.max_deviation = std::max(sat.max_deviation, (ms - best).cwiseAbs().maxCoeff() /
                                                        best.cwiseAbs().maxCoeff());
    ++sat.cases;
    for (int p = 0; p < projections; ++p) {
      const Eigen::MatrixXd other = random_orthonormal_rows(m, k, rng);
      const double lo = min_eigenvalue(ms - moment_matrix_for_readout(md, rr, other));
      dom.max_deviation = std::max(dom.max_deviation, -lo);
      ++dom.cases;
    }
  }
  sat.passed = sat.max_deviation <= sat.threshold;
  dom.passed = dom.max_deviation <= dom.threshold;
  return {sat, dom};
}

CheckResult check_shot_noise() {
  CheckResult r{"shot_noise_anchor", "abs", 0.0, 1e-9};
  for (int m = 1; m <= 4; ++m)
    for (const auto& [prep, strat] : kClosedForms)
      for (const auto& t : all_sign_patterns(m)) {
        const SqueezingOutcome o = optimize_scenario({12, m, prep, 0.0, strat, 0.0}, t);
        r.max_deviation = std::max(r.max_deviation, std::abs(o.xi2_inv - 1.0));
        ++r.cases;
      }
  for (Strategy st : {Strategy::Linear, Strategy::NonlocalMAI, Strategy::LocalMAI})
    for (double r_mai : {0.0, 0.5})
      for (const auto& t : all_sign_patterns(2)) {
        const double x = cv_xi2_matrix({0.0, st, r_mai, 0.0}, t).xi2_inv;
        r.max_deviation = std::max(r.max_deviation, std::abs(x - 1.0));
        ++r.cases;
      }
  r.passed = r.max_deviation <= r.threshold;
  return r;
}

std::vector<CheckResult> check_cv_pipeline() {
  CheckResult pipe{"cv_pipeline_vs_closed_form", "rel", 0.0, 1e-9};
  CheckResult ratio{"cv_noise_ratio", "rel", 0.0, 1e-12};
  const EstimationTarget t = EstimationTarget::uniform(2);
  for (int ir = 0; ir <= 10; ++ir)
    for (int is = 0; is <= 10; ++is) {
      const double r = 0.1 * ir;
      const double sigma = 0.1 * is;
      for (double r_mai : {0.0, r, 2.0 * r}) {
        for (Strategy st : {Strategy::Linear, Strategy::NonlocalMAI, Strategy::LocalMAI}) {
          const GaussianScenario g{r, st, r_mai, sigma};
          pipe.max_deviation =
              std::max(pipe.max_deviation, rel(cv_xi2_matrix(g, t).xi2_inv, cv_xi2_closed(g)));
          ++pipe.cases;
        }
        const double q = cv_xi2_closed({r, Strategy::Linear, r_mai, sigma}) /
                         cv_xi2_closed({r, Strategy::NonlocalMAI, r_mai, sigma});
        ratio.max_deviation = std::max(ratio.max_deviation, rel(noise_ratio(r, r_mai, sigma), q));
        ++ratio.cases;
      }
    }
  pipe.passed = pipe.max_deviation <= pipe.threshold;
  ratio.passed = ratio.max_deviation <= ratio.threshold;
  return {pipe, ratio};
}

CheckResult check_structured_inverse() {
  CheckResult r{"structured_vs_dense", "rel", 0.0, 1e-10};
  for (int m = 1; m <= 8; ++m)
    for (const auto& [prep, strat] : kClosedForms)
      for (double mu : {0.05, 0.3})
        for (double ma : {0.0, 0.2}) {
          const SpinScenario s{8 * m, m, prep, mu, strat, ma};
          const BlockSet b = spin_blocks(s);
          const MomentData md = spin_moments(s);
          const Eigen::MatrixXd dense = md.gamma.inverse();
          const Eigen::MatrixXd fast =
              expand(exchange_inverse({b.gamma_mm, b.gamma_mn}, m), m);
          r.max_deviation = std::max(r.max_deviation, (fast - dense).cwiseAbs().maxCoeff() /
                                                          dense.cwiseAbs().maxCoeff());
          for (double phi : {0.4, 1.9}) {
            double a = 0.0;
            try {
              a = squeezing_and_xi2(md, {phi}, EstimationTarget::uniform(m)).xi2_inv;
            } catch (const DegenerateScenario&) {
              continue;
            }
            const double f = xi2_structured(b, m, s.atoms_per_mode(), phi);
            r.max_deviation = std::max(r.max_deviation, rel(f, a));
          }
          ++r.cases;
        }
  r.passed = r.max_deviation <= r.threshold;
  return r;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json ValidationReport::to_json(const SweepConfig& cfg) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) list.push_back(c.to_json());
  return {{"config", config_json(cfg)}, {"checks", list}, {"passed", passed()}};
}

ValidationReport cmd_validate(const SweepConfig& cfg) {
  ValidationReport rep;
  auto add = [&](std::vector<CheckResult> v) {
    rep.checks.insert(rep.checks.end(), v.begin(), v.end());
  };
  add(check_oracle_equivalence(cfg.atoms, cfg.grid_step));
  add({check_sign_invariance()});
  add(check_cauchy_schwarz(100, 100, 20240601));
  add({check_shot_noise()});
  add(check_cv_pipeline());
  add({check_structured_inverse()});
  return rep;
}

}  // namespace maisense

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maisense/errors.hpp"
#include "maisense/fit.hpp"
#include "maisense/linalg.hpp"
#include "maisense/optimizer.hpp"
#include "maisense/search.hpp"
#include "maisense/spin_moments.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace maisense;
using doctest::Approx;

namespace {

const std::pair<Preparation, Strategy> kPairs[] = {
    {Preparation::ModeSeparable, Strategy::Linear},
    {Preparation::ModeSeparable, Strategy::LocalMAI},
    {Preparation::ModeEntangled, Strategy::Linear},
    {Preparation::ModeEntangled, Strategy::NonlocalMAI},
    {Preparation::ModeEntangled, Strategy::LocalMAI},
};

std::vector<EstimationTarget> sign_patterns(int m) {
  std::vector<EstimationTarget> out;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> s(m);
    for (int i = 0; i < m; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
    out.push_back(EstimationTarget::from_signs(s));
  }
  return out;
}

Eigen::MatrixXd random_rows(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(cols, rows);
  for (int i = 0; i < a.size(); ++i) a(i) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return (qr.householderQ() * Eigen::MatrixXd::Identity(cols, rows)).transpose();
}

}  // namespace

TEST_CASE("generator matrix has orthonormal rows") {
  for (int m : {1, 2, 5}) {
    const Eigen::MatrixXd r = generator_matrix({0.83}, m);
    CHECK((r * r.transpose() - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-15);
  }
  const double o[] = {1.0, -1.0};
  const Eigen::MatrixXd r = generator_matrix({0.3}, 2, o);
  CHECK(r(1, 2) == Approx(-std::cos(0.3)));
  CHECK_THROWS_AS(generator_matrix({0.3}, 3, o), InvalidScenario);
}

TEST_CASE("estimation targets") {
  const EstimationTarget t = EstimationTarget::uniform(4);
  CHECK(t.n.norm() == Approx(1.0).epsilon(1e-14));
  CHECK_NOTHROW(t.validate());
  EstimationTarget bad{Eigen::Vector2d(1.0, 0.0)};
  CHECK_THROWS_AS(bad.validate(), InvalidScenario);
}

TEST_CASE("coherent state moment matrix is shot noise") {
  for (int m : {1, 2, 4}) {
    const MomentData md = spin_moments({8 * m, m, Preparation::ModeEntangled, 0.0, Strategy::Linear, 0.0});
    for (double phi : {0.0, 0.4, 2.0})
      CHECK((moment_matrix(md, {phi}) - 8.0 * Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <
            1e-12);
  }
}

TEST_CASE("moment matrix scales inversely with the covariance") {
  MomentData md = spin_moments({12, 2, Preparation::ModeEntangled, 0.2, Strategy::Linear, 0.0});
  const Eigen::MatrixXd a = moment_matrix(md, {0.7});
  md.gamma *= 3.0;
  CHECK((moment_matrix(md, {0.7}) - a / 3.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coherent state readout measures the conjugate quadrature") {
  const MomentData md = spin_moments({6, 2, Preparation::ModeEntangled, 0.0, Strategy::Linear, 0.0});
  const Eigen::MatrixXd s = optimal_measurement(md, {0.0});
  CHECK(std::abs(s(0, 1)) == Approx(1.0));
  CHECK(std::abs(s(1, 3)) == Approx(1.0));
  CHECK(std::abs(s(0, 0)) < 1e-12);
}

TEST_CASE("optimal readout saturates the moment matrix") {
  for (const auto& [prep, strat] : kPairs) {
    const MomentData md = spin_moments({12, 3, prep, 0.25, strat, 0.2});
    const Eigen::MatrixXd s = optimal_measurement(md, {1.1});
    CHECK((s * s.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
    const Eigen::MatrixXd direct = moment_matrix_for_readout(md, generator_matrix({1.1}, 3), s);
    CHECK((direct - moment_matrix(md, {1.1})).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("random readouts never beat the optimum") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 2;
    Eigen::MatrixXd a(2 * m, 2 * m), c(2 * m, 2 * m);
    for (int i = 0; i < a.size(); ++i) a(i) = g(rng);
    for (int i = 0; i < c.size(); ++i) c(i) = g(rng);
    MomentData md;
    md.gamma = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(2 * m, 2 * m);
    md.commutator = c;
    md.f_sn = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd r = random_rows(m, 2 * m, rng);
    const Eigen::MatrixXd best =
        moment_matrix_for_readout(md, r, orthonormalize_rows(r * c.transpose() * md.gamma.inverse()));
    CHECK((best - r * full_moment_matrix(md.gamma, c) * r.transpose()).cwiseAbs().maxCoeff() <
          1e-9 * best.cwiseAbs().maxCoeff());
    for (int p = 0; p < 20; ++p)
      CHECK(min_eigenvalue(best - moment_matrix_for_readout(md, r, random_rows(m, 2 * m, rng))) >=
            -1e-9);
  }
}

TEST_CASE("shot-noise limit at mu = 0 for every sign pattern") {
  for (int m = 1; m <= 4; ++m)
    for (const auto& [prep, strat] : kPairs)
      for (const auto& t : sign_patterns(m)) {
        const MomentData md = spin_moments({12, m, prep, 0.0, strat, 0.0});
        CHECK(squeezing_and_xi2(md, {0.9}, t).xi2_inv == Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("sign invariance") {
  for (int m = 2; m <= 4; ++m)
    for (const auto& [prep, strat] : kPairs) {
      const MomentData md = spin_moments({12, m, prep, 0.3, strat, 0.25});
      const double ref = squeezing_and_xi2(md, {0.6}, EstimationTarget::uniform(m)).xi2_inv;
      for (const auto& t : sign_patterns(m))
        CHECK(squeezing_and_xi2(md, {0.6}, t).xi2_inv == Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("covariance and squeezing matrix relations") {
  const MomentData md = spin_moments({20, 2, Preparation::ModeEntangled, 0.1, Strategy::NonlocalMAI, 0.1});
  const EstimationTarget t = EstimationTarget::uniform(2);
  const SqueezingResult r = squeezing_and_xi2(md, {0.8}, t);
  const Eigen::MatrixXd a = moment_matrix(md, {0.8}, std::vector<double>{1.0, 1.0});
  CHECK((r.sigma - a.inverse()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(r.xi2_inv == Approx(t.n.dot(md.f_sn.inverse() * t.n) / t.n.dot(r.sigma * t.n)));
  CHECK(min_eigenvalue(r.sigma) > 0.0);
}

TEST_CASE("structured evaluation equals the dense pipeline") {
  for (int m = 1; m <= 8; ++m)
    for (const auto& [prep, strat] : kPairs) {
      const SpinScenario s{4 * m, m, prep, 0.3, strat, 0.2};
      const BlockSet b = spin_blocks(s);
      const MomentData md = spin_moments(s);
      const double dense = squeezing_and_xi2(md, {1.3}, EstimationTarget::uniform(m)).xi2_inv;
      CHECK(xi2_structured(b, m, 4.0, 1.3) == Approx(dense).epsilon(1e-10));
      const Eigen::MatrixXd inv = expand(exchange_inverse({b.gamma_mm, b.gamma_mn}, m), m);
      CHECK((inv - md.gamma.inverse()).cwiseAbs().maxCoeff() <
            1e-10 * md.gamma.inverse().cwiseAbs().maxCoeff());
    }
}

TEST_CASE("entangled linear and nonlocal MAI do not depend on M") {
  const SearchOptions opt;
  for (Strategy st : {Strategy::Linear, Strategy::NonlocalMAI}) {
    const MaiRange range{0.0, std::numbers::pi};
    double ref = 0.0;
    for (int m : {1, 2, 4, 10, 20}) {
      const SqueezingOutcome o = optimize_scenario({20 * 5, m, Preparation::ModeEntangled, 0.08, st, 0.0},
                                                   EstimationTarget::uniform(m), range, opt);
      if (ref == 0.0) ref = o.xi2_inv;
      CHECK(o.xi2_inv == Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("local MAI with one atom per mode is linear") {
  const SqueezingOutcome lin = optimize_scenario({12, 12, Preparation::ModeEntangled, 0.2, Strategy::Linear, 0.0},
                                                 EstimationTarget::uniform(12));
  const SqueezingOutcome loc = optimize_scenario({12, 12, Preparation::ModeEntangled, 0.2, Strategy::LocalMAI, 0.0},
                                                 EstimationTarget::uniform(12));
  CHECK(loc.xi2_inv == Approx(lin.xi2_inv).epsilon(1e-9));
}

TEST_CASE("optimize_scenario outcome") {
  const EstimationTarget t = EstimationTarget::uniform(2);
  const SqueezingOutcome lin =
      optimize_scenario({100, 2, Preparation::ModeEntangled, 0.1, Strategy::Linear, 0.7}, t);
  CHECK(lin.mu_mai_opt == 0.0);
  CHECK(lin.gain_db == Approx(10 * std::log10(lin.xi2_inv)).epsilon(1e-12));
  CHECK(lin.s_matrix.rows() == 2);
  CHECK((lin.s_matrix * lin.s_matrix.transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(lin.phi_opt >= 0.0);
  CHECK(lin.phi_opt < std::numbers::pi);

  const SqueezingOutcome mai =
      optimize_scenario({100, 2, Preparation::ModeEntangled, 0.1, Strategy::NonlocalMAI, 0.0}, t);
  CHECK(mai.xi2_inv >= lin.xi2_inv - 1e-9);
  const SqueezingOutcome again =
      optimize_scenario({100, 2, Preparation::ModeEntangled, 0.1, Strategy::NonlocalMAI, 0.0}, t);
  CHECK(again.xi2_inv == mai.xi2_inv);
  CHECK(again.mu_mai_opt == mai.mu_mai_opt);
}

TEST_CASE("default MAI range") {
  const MaiRange a = default_mai_range({100, 2, Preparation::ModeEntangled, 0.1, Strategy::LocalMAI, 0.0});
  CHECK(a.hi == Approx(16 * std::numbers::pi / 50));
  const MaiRange b = default_mai_range({4, 4, Preparation::ModeEntangled, 0.1, Strategy::LocalMAI, 0.0});
  CHECK(b.hi == Approx(std::numbers::pi));
  const MaiRange c = default_mai_range({10000, 2, Preparation::ModeEntangled, 0.5, Strategy::LocalMAI, 0.0});
  CHECK(c.hi == Approx(1.0));
}

TEST_CASE("angle search finds a known maximum") {
  const AngleOptimum a = maximize_angles(
      [](double phi, double mu) {
        return 5.0 - std::pow(std::sin(phi - 2.0), 2) - (mu - 0.37) * (mu - 0.37);
      },
      MaiRange{0.0, 1.0}, {});
  CHECK(a.phi == Approx(2.0).epsilon(1e-5));
  CHECK(a.mu_mai == Approx(0.37).epsilon(1e-5));
  CHECK(a.xi2_inv == Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(maximize_angles([](double, double) { return 0.0; }, MaiRange{1.0, 0.0}, {}), EmptyRange);
}

TEST_CASE("singular covariance handling") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
  g(0, 0) = 1.0;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 1) = 1.0;
  CHECK(full_moment_matrix(g, c)(1, 1) == Approx(1.0));
  c(1, 0) = 1.0;
  CHECK_THROWS_AS(full_moment_matrix(g, c), SingularGamma);
}

TEST_CASE("degenerate scenario") {
  MomentData md = assemble_full(BlockSet{Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero(),
                                         Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()},
                                2, 4.0);
  CHECK_THROWS_AS(squeezing_and_xi2(md, {0.1}, EstimationTarget::uniform(2)), DegenerateScenario);
}

TEST_CASE("search helpers") {
  const auto lin = linspace(0.0, 1.0, 5);
  CHECK(lin.size() == 5);
  CHECK(lin[2] == Approx(0.5));
  const auto lg = logspace(0.01, 1.0, 3);
  CHECK(lg[1] == Approx(0.1));
  CHECK_THROWS_AS(linspace(0.0, 1.0, 1), EmptyRange);
  CHECK_THROWS_AS(logspace(0.0, 1.0, 4), EmptyRange);
  const Maximum1D m = golden_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-9);
  CHECK(m.x == Approx(0.3).epsilon(1e-7));
}

TEST_CASE("power law fit") {
  std::vector<double> x{10, 100, 1000, 10000}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.75));
  const PowerLawFit f = fit_power_law(x, y);
  CHECK(f.slope == Approx(0.75).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == Approx(3.0).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);
  CHECK_THROWS(fit_power_law(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
}

TEST_CASE("joint optimum regression at N = 1000") {
  const ScalingPoint p = optimize_joint(1000, 2, Preparation::ModeEntangled, Strategy::Linear);
  CHECK(p.xi2_inv == Approx(83.6837577).epsilon(1e-7));
  CHECK(p.mu_mai_opt == 0.0);
}

TEST_CASE("scaling sweep fits a slope") {
  const int atoms[] = {64, 128, 256};
  const ScalingResult r = scaling_sweep(atoms, 2, Preparation::ModeEntangled, Strategy::Linear,
                                        EstimationTarget::uniform(2));
  CHECK(r.points.size() == 3);
  CHECK(r.fit.slope > 0.5);
  CHECK(r.fit.slope < 0.8);
  const int odd[] = {64, 129, 256};
  CHECK_THROWS_AS(scaling_sweep(odd, 2, Preparation::ModeEntangled, Strategy::Linear,
                                EstimationTarget::uniform(2)),
                  InvalidScenario);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maisense/errors.hpp"
#include "maisense/oracle.hpp"
#include "maisense/spin_moments.hpp"

#include <cmath>
#include <numbers>

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

double max_diff(const BlockSet& a, const BlockSet& b) {
  return std::max({(a.gamma_mm - b.gamma_mm).cwiseAbs().maxCoeff(),
                   (a.gamma_mn - b.gamma_mn).cwiseAbs().maxCoeff(),
                   (a.c_mm - b.c_mm).cwiseAbs().maxCoeff(),
                   (a.c_mn - b.c_mn).cwiseAbs().maxCoeff()});
}

}  // namespace

TEST_CASE("ms linear at mu = 0 is a coherent state") {
  const BlockSet b = blocks_ms_linear({4, 2, Preparation::ModeSeparable, 0.0, Strategy::Linear, 0.0});
  CHECK(b.gamma_mm(0, 0) == Approx(0.5));
  CHECK(b.gamma_mm(1, 1) == Approx(0.5));
  CHECK(b.gamma_mm(0, 1) == Approx(0.0));
  CHECK(std::abs(b.c_mm(0, 1)) == Approx(1.0));
  CHECK(std::abs(b.c_mm(1, 0)) == Approx(1.0));
  CHECK(b.gamma_mn.isZero());
  CHECK(b.c_mn.isZero());
}

TEST_CASE("ms linear variance has exponent zero for two atoms per mode") {
  const BlockSet b = blocks_ms_linear({4, 2, Preparation::ModeSeparable, 0.5, Strategy::Linear, 0.0});
  CHECK(b.gamma_mm(0, 0) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("me linear at quarter period") {
  const double q = std::numbers::pi / 2;
  const BlockSet b = blocks_me_linear({4, 2, Preparation::ModeEntangled, q, Strategy::Linear, 0.0});
  CHECK(b.gamma_mm(0, 0) == Approx(0.75).epsilon(1e-12));
  CHECK(b.gamma_mn(0, 0) == Approx(0.5).epsilon(1e-12));
  CHECK(b.c_mn.isZero());
  const BlockSet z = blocks_me_linear({4, 2, Preparation::ModeEntangled, 0.0, Strategy::Linear, 0.0});
  CHECK(z.gamma_mn.isZero());
}

TEST_CASE("echo restores coherent variances") {
  const BlockSet ms =
      blocks_ms_local_mai({8, 2, Preparation::ModeSeparable, 0.3, Strategy::LocalMAI, 0.3});
  CHECK(ms.gamma_mm(0, 0) == Approx(1.0).epsilon(1e-13));
  CHECK(ms.gamma_mm(0, 1) == Approx(0.0).scale(1.0));
  const BlockSet me =
      blocks_me_nonlocal_mai({8, 2, Preparation::ModeEntangled, 0.2, Strategy::NonlocalMAI, 0.2});
  CHECK(me.gamma_mm(0, 0) == Approx(1.0).epsilon(1e-13));
  CHECK(me.gamma_mm(0, 1) == Approx(0.0).scale(1.0));
}

TEST_CASE("zero MAI time reduces to linear up to commutator sign") {
  for (const auto& [prep, strat] : kPairs) {
    if (strat == Strategy::Linear) continue;
    const SpinScenario mai{12, 3, prep, 0.37, strat, 0.0};
    SpinScenario lin = mai;
    lin.strategy = Strategy::Linear;
    const BlockSet a = spin_blocks(mai);
    const BlockSet b = spin_blocks(lin);
    CHECK((a.gamma_mm - b.gamma_mm).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((a.gamma_mn - b.gamma_mn).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((a.c_mm.cwiseAbs() - b.c_mm.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("closed forms match the oracle at the documented points") {
  const SpinScenario cases[] = {
      {8, 2, Preparation::ModeSeparable, 0.4, Strategy::LocalMAI, 0.2},
      {8, 2, Preparation::ModeEntangled, 0.3, Strategy::NonlocalMAI, 0.15},
      {8, 2, Preparation::ModeEntangled, 0.4, Strategy::LocalMAI, 0.8},
      {4, 2, Preparation::ModeEntangled, std::numbers::pi / 2, Strategy::Linear, 0.0},
      {12, 2, Preparation::ModeSeparable, 0.1, Strategy::Linear, 0.0},
  };
  for (const auto& s : cases) CHECK(max_diff(spin_blocks(s), oracle_blocks(s)) < 1e-10);
}

TEST_CASE("one atom per mode evaluates without the oracle") {
  for (const auto& [prep, strat] : kPairs)
    for (double mu : {0.0, 1.0, 2.9})
      for (double ma : {0.0, 2.0}) {
        const SpinScenario s{4, 4, prep, mu, strat, ma};
        const BlockSet b = spin_blocks(s);
        CHECK(b.gamma_mm.allFinite());
        CHECK(b.c_mm.allFinite());
        CHECK(max_diff(b, oracle_blocks(s)) < 1e-12);
      }
}

TEST_CASE("assemble_full layout") {
  BlockSet b;
  b.gamma_mm << 1.0, 0.2, 0.2, 3.0;
  b.c_mm << 0.0, 1.0, -1.0, 0.0;
  const MomentData md = assemble_full(b, 3, 4.0);
  CHECK(md.gamma.rows() == 6);
  CHECK(md.gamma.block<2, 2>(0, 2).isZero());
  CHECK(md.gamma.block<2, 2>(4, 4) == b.gamma_mm);
  CHECK(md.f_sn.isApprox(4.0 * Eigen::MatrixXd::Identity(3, 3)));

  const MomentData one = assemble_full(b, 1, 4.0);
  CHECK(one.gamma == Eigen::MatrixXd(b.gamma_mm));
  CHECK(one.commutator == Eigen::MatrixXd(b.c_mm));
}

TEST_CASE("assembled covariance eigenvalues match the oracle") {
  const SpinScenario s{4, 2, Preparation::ModeEntangled, 0.7, Strategy::Linear, 0.0};
  const MomentData a = spin_moments(s);
  const MomentData o = oracle_moments(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a.gamma), eo(o.gamma);
  CHECK((ea.eigenvalues() - eo.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exchange symmetry of the assembled matrices") {
  const MomentData md = spin_moments({12, 3, Preparation::ModeEntangled, 0.3, Strategy::NonlocalMAI, 0.2});
  Eigen::PermutationMatrix<Eigen::Dynamic> p(6);
  p.indices() << 2, 3, 0, 1, 4, 5;
  CHECK((p * md.gamma * p.transpose() - md.gamma).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p * md.commutator * p.transpose() - md.commutator).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single mode: separable and entangled preparations coincide") {
  for (double mu : {0.1, 0.9})
    for (Strategy st : {Strategy::Linear, Strategy::LocalMAI}) {
      const BlockSet a = spin_blocks({10, 1, Preparation::ModeSeparable, mu, st, 0.3});
      const BlockSet b = spin_blocks({10, 1, Preparation::ModeEntangled, mu, st, 0.3});
      CHECK(max_diff(a, b) < 1e-12);
    }
}

TEST_CASE("covariance is positive semidefinite") {
  for (const auto& [prep, strat] : kPairs)
    for (double mu = 0.0; mu < 3.2; mu += 0.35)
      for (double ma = 0.0; ma < 3.2; ma += 0.5) {
        const MomentData md = spin_moments({12, 2, prep, mu, strat, ma});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e(md.gamma);
        CHECK(e.eigenvalues().minCoeff() >= -1e-10);
        CHECK((md.gamma - md.gamma.transpose()).cwiseAbs().maxCoeff() == 0.0);
      }
}

TEST_CASE("large atom numbers stay finite") {
  const BlockSet b = spin_blocks({20000, 2, Preparation::ModeEntangled, 0.01, Strategy::NonlocalMAI, 0.012});
  CHECK(b.gamma_mm.allFinite());
  CHECK(b.c_mn.allFinite());
}

TEST_CASE("invalid scenarios are rejected") {
  CHECK_THROWS_AS(blocks_ms_linear({4, 2, Preparation::ModeEntangled, 0.1, Strategy::Linear, 0.0}),
                  InvalidScenario);
  CHECK_THROWS_AS(spin_blocks({4, 2, Preparation::ModeSeparable, 0.1, Strategy::NonlocalMAI, 0.1}),
                  InvalidScenario);
  CHECK_THROWS_AS(spin_blocks({5, 2, Preparation::ModeEntangled, 0.1, Strategy::Linear, 0.0}),
                  InvalidScenario);
  CHECK_THROWS_AS(spin_blocks({1, 1, Preparation::ModeEntangled, 0.1, Strategy::Linear, 0.0}),
                  InvalidScenario);
  CHECK_THROWS_AS(spin_blocks({4, 2, Preparation::ModeEntangled, -0.1, Strategy::Linear, 0.0}),
                  InvalidScenario);
  CHECK_FALSE(has_closed_form(Preparation::ModeSeparable, Strategy::NonlocalMAI));
  CHECK(has_closed_form(Preparation::ModeEntangled, Strategy::NonlocalMAI));
}

TEST_CASE("enum text round trip") {
  CHECK(parse_preparation("ms") == Preparation::ModeSeparable);
  CHECK(parse_strategy(to_string(Strategy::NonlocalMAI)) == Strategy::NonlocalMAI);
  CHECK_THROWS(parse_strategy("bogus"));
}

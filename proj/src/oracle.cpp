#include "maisense/oracle.hpp"

#include "maisense/errors.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace maisense {
namespace {

// m_z of `mode` for every basis index.
Eigen::VectorXd mode_mz(int modes, int per_mode, int mode) {
  const long dim = oracle_dimension(modes, per_mode);
  const long base = per_mode + 1;
  long stride = 1;
  for (int m = modes - 1; m > mode; --m) stride *= base;
  const double j = per_mode / 2.0;
  Eigen::VectorXd out(dim);
  for (long i = 0; i < dim; ++i) out(i) = j - static_cast<double>((i / stride) % base);
  return out;
}

void check_mode(int modes, int mode) {
  if (mode < 0 || mode >= modes) throw InvalidScenario("mode index out of range");
}

}  // namespace

long oracle_dimension(int modes, int per_mode) {
  if (modes < 1 || per_mode < 1) throw InvalidScenario("oracle needs M >= 1 and N_m >= 1");
  long dim = 1;
  for (int m = 0; m < modes; ++m) {
    dim *= per_mode + 1;
    if (dim > kOracleDimensionCap)
      throw DimensionCap("oracle dimension (N_m+1)^M exceeds " +
                         std::to_string(kOracleDimensionCap));
  }
  return dim;
}

CollectiveState coherent_x_state(int modes, int per_mode) {
  const long dim = oracle_dimension(modes, per_mode);
  Eigen::VectorXd single(per_mode + 1);
  for (int k = 0; k <= per_mode; ++k)
    single(k) = std::exp(0.5 * (std::lgamma(per_mode + 1.0) - std::lgamma(k + 1.0) -
                                std::lgamma(per_mode - k + 1.0)) -
                         0.5 * per_mode * std::log(2.0));
  CollectiveState st;
  st.modes = modes;
  st.per_mode = per_mode;
  st.amplitudes.resize(dim);
  const long base = per_mode + 1;
  for (long i = 0; i < dim; ++i) {
    double a = 1.0;
    long rest = i;
    for (int m = 0; m < modes; ++m) {
      a *= single(rest % base);
      rest /= base;
    }
    st.amplitudes(i) = a;
  }
  return st;
}

Eigen::VectorXd oat_generator_diagonal(int modes, int per_mode, const OatScope& scope) {
  const long dim = oracle_dimension(modes, per_mode);
  switch (scope.kind) {
    case OatScope::Kind::SingleMode: {
      check_mode(modes, scope.mode);
      return mode_mz(modes, per_mode, scope.mode).array().square();
    }
    case OatScope::Kind::EachMode: {
      Eigen::VectorXd q = Eigen::VectorXd::Zero(dim);
      for (int m = 0; m < modes; ++m) q += mode_mz(modes, per_mode, m).array().square().matrix();
      return q;
    }
    case OatScope::Kind::AllModes:
      break;
  }
  Eigen::VectorXd tot = Eigen::VectorXd::Zero(dim);
  for (int m = 0; m < modes; ++m) tot += mode_mz(modes, per_mode, m);
  return tot.array().square();
}

CollectiveState evolve_oat(const CollectiveState& st, double mu, const OatScope& scope) {
  const Eigen::VectorXd q = oat_generator_diagonal(st.modes, st.per_mode, scope);
  CollectiveState out = st;
  for (long i = 0; i < st.dim(); ++i) out.amplitudes(i) *= std::polar(1.0, -0.5 * mu * q(i));
  return out;
}

SparseOp observable_matrix(int modes, int per_mode, int mode, Axis axis) {
  check_mode(modes, mode);
  const long dim = oracle_dimension(modes, per_mode);
  const long base = per_mode + 1;
  long stride = 1;
  for (int m = modes - 1; m > mode; --m) stride *= base;
  const double j = per_mode / 2.0;

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(2 * dim));
  for (long i = 0; i < dim; ++i) {
    const long k = (i / stride) % base;
    const double mz = j - k;
    if (axis == Axis::Z) {
      if (mz != 0.0) trip.emplace_back(i, i, mz);
      continue;
    }
    // <m+1|S+|m> links digit k to k-1.
    if (k > 0) {
      const double amp = std::sqrt(j * (j + 1.0) - mz * (mz + 1.0));
      const long up = i - stride;
      const cplx raise = axis == Axis::X ? cplx(amp / 2.0, 0.0) : cplx(0.0, -amp / 2.0);
      trip.emplace_back(up, i, raise);
      trip.emplace_back(i, up, std::conj(raise));
    }
  }
  SparseOp op(dim, dim);
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

SparseOp mai_observable(const SparseOp& ob, double mu_mai, int modes, int per_mode,
                        const OatScope& scope) {
  if (mu_mai == 0.0) return ob;
  const Eigen::VectorXd q = oat_generator_diagonal(modes, per_mode, scope);
  if (q.size() != ob.rows()) throw InvalidScenario("observable dimension mismatch");
  SparseOp out = ob;
  for (Eigen::Index r = 0; r < out.outerSize(); ++r)
    for (SparseOp::InnerIterator it(out, r); it; ++it)
      it.valueRef() *= std::polar(1.0, 0.5 * mu_mai * (q(it.col()) - q(it.row())));
  return out;
}

MomentData oracle_moments(const SpinScenario& s) {
  s.validate();
  const int modes = s.modes;
  const int n = s.atoms_per_mode();
  const OatScope prep_scope =
      s.prep == Preparation::ModeEntangled ? OatScope::all() : OatScope::each();
  const CollectiveState st = evolve_oat(coherent_x_state(modes, n), s.mu, prep_scope);
  const Eigen::VectorXcd& psi = st.amplitudes;

  // X psi = U^dag L (U psi) with U = exp(+i mu_mai/2 Q) diagonal, which is
  // mai_observable() applied without forming the conjugated operator.
  Eigen::VectorXcd u = Eigen::VectorXcd::Ones(st.dim());
  if (s.strategy != Strategy::Linear && s.mu_mai != 0.0) {
    const OatScope mai_scope =
        s.strategy == Strategy::NonlocalMAI ? OatScope::all() : OatScope::each();
    const Eigen::VectorXd q = oat_generator_diagonal(modes, n, mai_scope);
    for (long i = 0; i < st.dim(); ++i) u(i) = std::polar(1.0, 0.5 * s.mu_mai * q(i));
  }
  const Eigen::VectorXcd u_psi = u.cwiseProduct(psi);

  const int k = 2 * modes;
  std::vector<Eigen::VectorXcd> l_psi, x_psi;
  for (int m = 0; m < modes; ++m)
    for (Axis axis : {Axis::Y, Axis::Z}) {
      const SparseOp l = observable_matrix(modes, n, m, axis);
      l_psi.push_back(l * psi);
      x_psi.push_back(u.conjugate().cwiseProduct(l * u_psi));
    }

  Eigen::VectorXd mean(k);
  for (int i = 0; i < k; ++i) mean(i) = psi.dot(x_psi[i]).real();
  MomentData md;
  md.gamma.resize(k, k);
  md.commutator.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      // <X_i X_j> = <X_i psi | X_j psi>; symmetrizing keeps the real part.
      md.gamma(i, j) = x_psi[i].dot(x_psi[j]).real() - mean(i) * mean(j);
      // -i<[X_i, L_j]> = 2 Im <X_i psi | L_j psi>.
      md.commutator(i, j) = 2.0 * x_psi[i].dot(l_psi[j]).imag();
    }
  md.gamma = 0.5 * (md.gamma + md.gamma.transpose()).eval();
  md.f_sn = n * Eigen::MatrixXd::Identity(modes, modes);
  return md;
}

BlockSet oracle_blocks(const SpinScenario& s) {
  const MomentData md = oracle_moments(s);
  BlockSet b;
  b.gamma_mm = md.gamma.block<2, 2>(0, 0);
  b.c_mm = md.commutator.block<2, 2>(0, 0);
  if (s.modes > 1) {
    b.gamma_mn = md.gamma.block<2, 2>(0, 2);
    b.c_mn = md.commutator.block<2, 2>(0, 2);
  }
  return b;
}

namespace {

// Oracle evaluator that rebuilds the moments only when mu_mai changes; the
// angle search sweeps phi innermost.
Xi2Evaluator oracle_evaluator(const SpinScenario& s, const EstimationTarget& t) {
  struct Cache {
    double mu_mai = -1.0;
    MomentData md;
  };
  auto cache = std::make_shared<Cache>();
  return [s, t, cache](double phi, double mu_mai) {
    if (cache->mu_mai != mu_mai) {
      SpinScenario at = s;
      at.mu_mai = mu_mai;
      cache->md = oracle_moments(at);
      cache->mu_mai = mu_mai;
    }
    try {
      return squeezing_and_xi2(cache->md, {phi}, t).xi2_inv;
    } catch (const DegenerateScenario&) {
      return 0.0;
    }
  };
}

}  // namespace

double oracle_xi2(const SpinScenario& s, const EstimationTarget& t, const SearchOptions& opt) {
  t.validate();
  if (t.modes() != s.modes) throw InvalidScenario("target size does not match mode count");
  const double mu_mai = s.strategy == Strategy::Linear ? 0.0 : s.mu_mai;
  const Xi2Evaluator f = oracle_evaluator(s, t);
  return maximize_angles([&](double phi, double) { return f(phi, mu_mai); }, std::nullopt, opt)
      .xi2_inv;
}

SqueezingOutcome oracle_optimize(const SpinScenario& s, const EstimationTarget& t,
                                 std::optional<MaiRange> mai_range, const SearchOptions& opt) {
  s.validate();
  t.validate();
  if (t.modes() != s.modes) throw InvalidScenario("target size does not match mode count");
  std::optional<MaiRange> range;
  if (s.strategy != Strategy::Linear) range = mai_range ? *mai_range : default_mai_range(s);
  const AngleOptimum a = maximize_angles(oracle_evaluator(s, t), range, opt);

  SpinScenario at = s;
  at.mu_mai = a.mu_mai;
  const MomentData md = oracle_moments(at);
  const SqueezingResult r = squeezing_and_xi2(md, {a.phi}, t);
  std::vector<double> orient(t.modes());
  for (int m = 0; m < t.modes(); ++m) orient[m] = t.n(m) < 0.0 ? -1.0 : 1.0;

  SqueezingOutcome out;
  out.xi2_inv = r.xi2_inv;
  out.gain_db = to_db(r.xi2_inv);
  out.phi_opt = a.phi;
  out.mu_mai_opt = a.mu_mai;
  out.s_matrix = optimal_measurement(md, {a.phi}, orient);
  out.sigma = r.sigma;
  return out;
}

}  // namespace maisense

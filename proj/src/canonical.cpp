#include "qbench/canonical.hpp"

#include <sstream>

namespace qb {

namespace {

constexpr double kSupportTol = 1e-9;

// Theorem-1 construction shared by the deterministic and probabilistic recipes.
CanonicalTestRecipe build_recipe(const Operator& omega, const Operator& tau) {
  if (omega.n_sys() != 2) throw ArgumentError("canonical test: omega must be bipartite");
  if (tau.n_sys() != 1 || tau.dim() != omega.dims()[1])
    throw ArgumentError("canonical test: tau_A does not match the input factor");
  const int dAp = omega.dims()[0], dA = omega.dims()[1];
  const Operator OT = partial_transpose(omega, 1);

  // Omega^{T_A} must live on the support of I (x) tau^T (the transpose is taken in the computational basis).
  const auto et = hermitian_eig(Mat(tau.mat().transpose()));
  const double lmax = et.values.maxCoeff();
  const double scale = omega.mat().norm();
  double worst = 0;
  int worst_col = -1;
  Mat Pker = Mat::Zero(dA, dA);
  for (int i = 0; i < dA; ++i) {
    if (et.values(i) > kRankTol * lmax) continue;
    const Mat P = et.vectors.col(i) * et.vectors.col(i).adjoint();
    Pker += P;
    const double r = (kron(Mat(Mat::Identity(dAp, dAp)), P) * OT.mat()).norm();
    if (r > worst) worst = r, worst_col = i;
  }
  const double residual = (kron(Mat(Mat::Identity(dAp, dAp)), Pker) * OT.mat()).norm();
  if (residual > kSupportTol * scale) {
    const Vec v = et.vectors.col(worst_col).conjugate();  // kernel vector of tau itself
    std::vector<double> re(dA), im(dA);
    std::ostringstream os;
    os << "I (x) tau_A is not invertible on the support of Omega^{T_A}: residual " << residual
       << " along kernel direction [";
    for (int k = 0; k < dA; ++k) {
      re[k] = v(k).real(), im[k] = v(k).imag();
      os << (k ? ", " : "") << v(k).real() << (v(k).imag() < 0 ? "" : "+") << v(k).imag() << "i";
    }
    os << "]";
    throw InvertibilityError(os.str(), re, im);
  }

  const PureState psi = purify(tau);
  // reference vectors are conj(v_n), so the pairing is (tau^T)^{-1/2} on the support
  const Mat IM = kron(Mat(Mat::Identity(dAp, dAp)), psd_inv_sqrt(Mat(tau.mat().transpose())));
  Mat O = IM * OT.mat() * IM;
  O = 0.5 * (O + O.adjoint());

  CanonicalTestRecipe rec{psi, Operator({dAp, dA}, O), tau, 0.0, std::nullopt, 0.0};
  const Operator back = performance_operator(rec.as_det_test());
  rec.residual = (back.mat() - omega.mat()).norm();
  return rec;
}

}  // namespace

DetTest CanonicalTestRecipe::as_det_test() const { return DetTest(input_state.projector(), observable); }

Operator default_tau(const Operator& omega) {
  if (omega.n_sys() != 2) throw ArgumentError("default_tau: omega must be bipartite");
  // Support of the input marginal of Omega^2 is the smallest S with Omega = (I (x) P_S) Omega (I (x) P_S).
  const Operator sq(omega.dims(), omega.mat() * omega.mat());
  const Mat marg = partial_trace(sq, {1}).mat();
  const Mat P = support_projector(marg, 1e-10);
  const double rank = P.trace().real();
  if (rank < 0.5) throw ArgumentError("default_tau: omega is zero");
  return Operator({omega.dims()[1]}, P / rank);
}

CanonicalTestRecipe canonical_det_test(const Operator& omega, const Operator& tau_A) {
  return build_recipe(omega, tau_A);
}

CanonicalTestRecipe canonical_det_test(const Operator& omega) { return build_recipe(omega, default_tau(omega)); }

CanonicalTestRecipe canonical_prob_test(const ProbTest& t) { return build_recipe(t.omega(), t.sigma_A()); }

bool tests_equivalent_det(const DetTest& a, const DetTest& b, double tol) {
  const Operator oa = performance_operator(a), ob = performance_operator(b);
  if (oa.dims() != ob.dims()) throw ArgumentError("tests_equivalent_det: dims mismatch");
  return (oa.mat() - ob.mat()).norm() <= tol;
}

bool tests_equivalent_prob(const ProbTest& a, const ProbTest& b, double tol) {
  if (a.omega().dims() != b.omega().dims()) throw ArgumentError("tests_equivalent_prob: dims mismatch");
  return (a.omega().mat() - b.omega().mat()).norm() <= tol && (a.sigma_A().mat() - b.sigma_A().mat()).norm() <= tol;
}

CanonicalTestRecipe fully_blackbox_test(const Operator& omega, const SearchConfig& cfg, const GroupRep* rep) {
  Operator shifted = omega;
  double offset = 0;
  if (!is_ppt(omega)) {
    // canonical observable at tau = I/d is d * Omega^{T_A}; shift it by its norm
    const double s = spectral_norm(partial_transpose(omega, 1).mat());
    shifted = omega + Operator::identity(omega.dims()) * s;
    offset = s * omega.dims()[1];
  }
  const DetBenchmark db = det_benchmark(shifted, cfg, rep);
  const ProbTest pt(shifted, db.tau_min);
  CanonicalTestRecipe rec = canonical_prob_test(pt);
  const PnrResult pb = prob_benchmark(pt, cfg.pnr);
  rec.offset = offset;
  rec.benchmark = pb.value - offset;
  return rec;
}

ProbScore recipe_score(const CanonicalTestRecipe& r, const Channel& c, double p_min) {
  const Operator out = apply_channel_first(c, r.input_state.projector());
  const double p = out.trace().real();
  if (p <= p_min) {
    std::ostringstream os;
    os << "success probability " << p << " at or below " << p_min;
    throw VanishingSuccess(os.str());
  }
  const cplx num = (r.observable.mat().transpose().cwiseProduct(out.mat())).sum();
  if (std::abs(num.imag()) > 1e-9) throw NumericalInconsistency("recipe_score: imaginary residue");
  return {num.real() / p, p};
}

json to_json(const CanonicalTestRecipe& r) {
  json j{{"input_state", to_json(r.input_state)},
         {"observable", to_json(r.observable)},
         {"tau_A", to_json(r.tau_A)},
         {"offset", r.offset},
         {"residual", r.residual}};
  j["benchmark"] = r.benchmark ? json(*r.benchmark) : json(nullptr);
  return j;
}

}  // namespace qb

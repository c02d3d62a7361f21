#include "qbench/benchmark.hpp"

#include <gsl/gsl_multimin.h>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace qb {

GroupRep::GroupRep(std::vector<std::pair<Mat, Mat>> els, std::vector<double> w)
    : elements(std::move(els)), weights(std::move(w)) {
  if (elements.empty()) throw ArgumentError("GroupRep: no elements");
  if (weights.empty()) weights.assign(elements.size(), 1.0 / static_cast<double>(elements.size()));
  if (weights.size() != elements.size()) throw ArgumentError("GroupRep: one weight per element");
  double total = 0;
  for (double w0 : weights) total += w0;
  if (std::abs(total - 1.0) > 1e-12) throw ArgumentError("GroupRep: weights do not sum to 1");
  for (const auto& [U, Up] : elements) {
    if (U.rows() != dim_in() || Up.rows() != dim_out()) throw ArgumentError("GroupRep: mixed dimensions");
    if ((U.adjoint() * U - Mat::Identity(U.rows(), U.rows())).norm() > 1e-9 ||
        (Up.adjoint() * Up - Mat::Identity(Up.rows(), Up.rows())).norm() > 1e-9)
      throw ArgumentError("GroupRep: element is not unitary");
  }
}

Operator conjugate_by_inverse_sqrt(const Operator& omega, const Mat& s) {
  const int dAp = omega.dims()[0];
  const Mat X = kron(Mat(Mat::Identity(dAp, dAp)), psd_inv_sqrt(s));
  Mat m = X * omega.mat() * X;
  return Operator(omega.dims(), 0.5 * (m + m.adjoint()));
}

bool is_ppt(const Operator& omega, double tol) { return lambda_min(partial_transpose(omega, 1).mat()) >= -tol; }

namespace {

void require_ppt(const Operator& omega, const char* who) {
  const double mn = lambda_min(partial_transpose(omega, 1).mat());
  if (mn < -1e-9) {
    std::ostringstream os;
    os << who << ": omega is not PPT (min eigenvalue of the partial transpose " << mn
       << "); apply ppt_offset first";
    throw PptViolation(os.str());
  }
}

Mat tau_from_params(const double* x, int d) {
  Mat L = Mat::Zero(d, d);
  int p = d;
  for (int i = 0; i < d; ++i) L(i, i) = x[i];
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j, p += 2) L(i, j) = cplx(x[p], x[p + 1]);
  Mat t = L * L.adjoint();
  return t / t.trace().real();
}

struct NmContext {
  const Operator* omega;
  int d;
  PnrConfig inner;
  int evals = 0;
  double best = 1e300;
  std::vector<double> best_x;
};

double nm_objective(const gsl_vector* v, void* p) {
  auto* ctx = static_cast<NmContext*>(p);
  ++ctx->evals;
  const Mat tau = tau_from_params(v->data, ctx->d);
  if (lambda_min(tau) < 1e-12) return 1e300;
  const double f = product_numerical_range(conjugate_by_inverse_sqrt(*ctx->omega, tau), ctx->inner).value;
  if (f < ctx->best) {
    ctx->best = f;
    ctx->best_x.assign(v->data, v->data + v->size);
  }
  return f;
}

}  // namespace

DetBenchmark det_benchmark(const Operator& omega, const SearchConfig& cfg, const GroupRep* rep) {
  if (omega.n_sys() != 2) throw ArgumentError("det_benchmark: omega must be bipartite");
  if (!omega.is_hermitian()) throw ContractViolation("det_benchmark: omega is not Hermitian");
  require_ppt(omega, "det_benchmark");
  const int d = omega.dims()[1];

  DetBenchmark out;
  if (rep && check_covariance(omega, *rep) && is_irreducible(*rep)) {
    out.value = covariant_benchmark(omega, *rep, cfg.pnr, &out.pnr);
    out.tau_min = Operator({d}, Mat::Identity(d, d) / d);
    out.pnr.value *= d;
    out.pnr.lower_bound *= d;
    out.pnr.upper_bound *= d;
    out.pnr.method = PnrMethod::closed_form;
    out.method = PnrMethod::closed_form;
    return out;
  }

  const int n = d * d;
  NmContext ctx{&omega, d, cfg.pnr, 0, 1e300, {}};
  ctx.inner.restarts = cfg.inner_restarts;
  ctx.inner.grid = false;

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_calloc(n), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(n), &gsl_vector_free);
  for (int i = 0; i < d; ++i) gsl_vector_set(x.get(), i, 1.0);  // tau = I/d
  gsl_vector_set_all(step.get(), cfg.initial_step);

  gsl_multimin_function fn{&nm_objective, static_cast<size_t>(n), &ctx};
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());

  bool converged = false;
  while (ctx.evals < cfg.max_evals) {
    if (gsl_multimin_fminimizer_iterate(s.get())) break;
    if (gsl_multimin_fminimizer_size(s.get()) < cfg.simplex_tol) {
      converged = true;
      break;
    }
  }
  out.evaluations = ctx.evals;
  out.converged = converged;
  const Mat tau = tau_from_params(ctx.best_x.data(), d);
  out.tau_min = Operator({d}, tau);
  out.pnr = product_numerical_range(conjugate_by_inverse_sqrt(omega, tau), cfg.pnr);
  out.value = out.pnr.value;
  out.method = PnrMethod::seesaw;
  if (!converged) {
    std::ostringstream os;
    os << "det_benchmark: tau search stalled after " << ctx.evals << " evaluations (simplex size "
       << gsl_multimin_fminimizer_size(s.get()) << ", best value " << out.value << ")";
    throw SearchFailure(os.str(), out.value, ctx.best_x);
  }
  return out;
}

PnrResult prob_benchmark(const ProbTest& t, const PnrConfig& cfg) {
  const int dAp = t.omega().dims()[0], dA = t.omega().dims()[1];
  const Mat& s = t.sigma_A().mat();
  const Mat ker = Mat::Identity(dA, dA) - support_projector(s);
  const double leak = (kron(Mat(Mat::Identity(dAp, dAp)), ker) * t.omega().mat()).norm();
  if (leak > 1e-9 * t.omega().mat().norm()) {
    std::ostringstream os;
    os << "prob_benchmark: omega has weight " << leak << " outside the support of sigma_A";
    throw InvertibilityError(os.str(), {}, {});
  }
  return product_numerical_range(conjugate_by_inverse_sqrt(t.omega(), s), cfg);
}

bool check_covariance(const Operator& omega, const GroupRep& rep, double tol, int* failing) {
  if (omega.dims() != Dims{rep.dim_out(), rep.dim_in()}) throw ArgumentError("check_covariance: dims mismatch");
  const double scale = omega.mat().norm();
  for (size_t g = 0; g < rep.elements.size(); ++g) {
    const Mat V = kron(rep.elements[g].second, rep.elements[g].first);
    if ((omega.mat() * V - V * omega.mat()).norm() > tol * scale) {
      if (failing) *failing = static_cast<int>(g);
      return false;
    }
  }
  return true;
}

bool is_irreducible(const GroupRep& rep, std::uint64_t seed, double tol) {
  const int d = rep.dim_in();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Mat H(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) H(i, j) = cplx(nd(rng), nd(rng));
  H = 0.5 * (H + H.adjoint());
  Mat T = Mat::Zero(d, d);
  for (size_t g = 0; g < rep.elements.size(); ++g) {
    const Mat& U = rep.elements[g].first;
    T += rep.weights[g] * U * H * U.adjoint();
  }
  const Mat off = T - (T.trace() / static_cast<double>(d)) * Mat::Identity(d, d);
  return off.norm() <= tol * H.norm();
}

double covariant_benchmark(const Operator& omega, const GroupRep& rep, const PnrConfig& cfg, PnrResult* pnr_out) {
  int bad = -1;
  if (!check_covariance(omega, rep, 1e-9, &bad)) {
    std::ostringstream os;
    os << "covariant_benchmark: omega does not commute with group element " << bad;
    throw PreconditionError(os.str());
  }
  if (!is_irreducible(rep)) throw PreconditionError("covariant_benchmark: input representation is reducible");
  const PnrResult r = product_numerical_range(omega, cfg);
  if (pnr_out) *pnr_out = r;
  return rep.dim_in() * r.value;
}

Channel optimal_mp_channel(const Operator& omega, const GroupRep& rep, const std::optional<SeedVectors>& seeds,
                           const PnrConfig& cfg) {
  int bad = -1;
  if (!check_covariance(omega, rep, 1e-9, &bad)) {
    std::ostringstream os;
    os << "optimal_mp_channel: omega does not commute with group element " << bad;
    throw PreconditionError(os.str());
  }
  Vec phi, psi;
  if (seeds) {
    phi = seeds->phi.normalized();
    psi = seeds->psi.normalized();
  } else {
    const PnrResult r = product_numerical_range(omega, cfg);
    phi = r.b;
    psi = r.a;
  }
  const int d = rep.dim_in();
  std::vector<Operator> povm, outs;
  Mat S = Mat::Zero(d, d);
  for (size_t g = 0; g < rep.elements.size(); ++g) {
    const auto& [U, Up] = rep.elements[g];
    const Vec f = U * phi, e = Up * psi;
    const Mat P = d * rep.weights[g] * f * f.adjoint();
    S += P;
    povm.emplace_back(Dims{d}, P);
    outs.emplace_back(Dims{rep.dim_out()}, e * e.adjoint());
  }
  const double dev = (S - Mat::Identity(d, d)).norm();
  if (dev > 1e-9) {
    std::ostringstream os;
    os << "optimal_mp_channel: POVM is incomplete (|sum - I|_F = " << dev << "); representation not irreducible?";
    throw ConstructionError(os.str());
  }
  return mp_channel(povm, outs);
}

Shifted ppt_offset(const Operator& observable) {
  if (!observable.is_hermitian()) throw ContractViolation("ppt_offset: observable is not Hermitian");
  const double s = spectral_norm(observable.mat());
  return {observable + Operator::identity(observable.dims()) * s, s};
}

Channel optimal_prob_mp_channel(const ProbTest& t, const PnrConfig& cfg) {
  const PnrResult r = prob_benchmark(t, cfg);
  const Vec q = (psd_inv_sqrt(t.sigma_A().mat()) * r.b).normalized();
  return Channel({r.a * q.adjoint()}, false);
}

json pnr_to_json(const PnrResult& r) {
  return json{{"value", r.value},
              {"lower", r.lower_bound},
              {"upper", r.upper_bound},
              {"method", to_string(r.method)},
              {"restarts", r.restarts}};
}

json report_json(const DetBenchmark& b, int restarts) {
  return json{{"value", b.value},
              {"lower", b.pnr.lower_bound},
              {"upper", b.pnr.upper_bound},
              {"tau_min", to_json(b.tau_min)},
              {"method", to_string(b.method)},
              {"restarts", restarts},
              {"evaluations", b.evaluations}};
}

}  // namespace qb

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qbench/benchmark.hpp"
#include "qbench/kernels.hpp"

namespace qb {

namespace kernels {

Mat contract_second(const Mat& M, int dAp, int dA, const Vec& b) {
  Mat R(dAp, dAp);
  for (int k = 0; k < dAp; ++k)
    for (int i = 0; i < dAp; ++i) R(i, k) = b.dot(M.block(i * dA, k * dA, dA, dA) * b);
  return R;
}

Mat contract_first(const Mat& M, int dAp, int dA, const Vec& a) {
  Mat R = Mat::Zero(dA, dA);
  for (int k = 0; k < dAp; ++k)
    for (int i = 0; i < dAp; ++i) {
      const cplx c = std::conj(a(i)) * a(k);
      if (c != cplx(0)) R += c * M.block(i * dA, k * dA, dA, dA);
    }
  return R;
}

namespace {

std::pair<double, Vec> top_eigen(const Mat& R) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (R + R.adjoint()));
  const Eigen::Index n = R.rows();
  return {es.eigenvalues()(n - 1), es.eigenvectors().col(n - 1)};
}

}  // namespace

SeesawRun seesaw_from(const Mat& M, int dAp, int dA, const Vec& b0, double tol, int max_iter) {
  SeesawRun run;
  run.b = b0.normalized();
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    auto [va, a] = top_eigen(contract_second(M, dAp, dA, run.b));
    auto [vb, b] = top_eigen(contract_first(M, dAp, dA, a));
    run.a = std::move(a);
    run.b = std::move(b);
    run.value = vb;
    run.iters = it + 1;
    if (std::abs(vb - prev) < tol) break;
    prev = vb;
  }
  return run;
}

std::vector<SeesawRun> seesaw_multistart_serial(const Mat& M, int dAp, int dA, const std::vector<Vec>& starts,
                                                double tol, int max_iter) {
  std::vector<SeesawRun> out(starts.size());
  for (size_t s = 0; s < starts.size(); ++s) out[s] = seesaw_from(M, dAp, dA, starts[s], tol, max_iter);
  return out;
}

std::vector<SeesawRun> seesaw_multistart(const Mat& M, int dAp, int dA, const std::vector<Vec>& starts,
                                         double tol, int max_iter) {
  std::vector<SeesawRun> out(starts.size());
  const long long n = static_cast<long long>(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (long long s = 0; s < n; ++s) out[s] = seesaw_from(M, dAp, dA, starts[s], tol, max_iter);
  return out;
}

const SeesawRun& best_run(const std::vector<SeesawRun>& runs) {
  size_t best = 0;
  for (size_t s = 1; s < runs.size(); ++s)
    if (runs[s].value > runs[best].value) best = s;
  return runs[best];
}

long long SphereGrid::size() const {
  long long n = 1;
  for (int k = 0; k < d - 1; ++k) n *= static_cast<long long>(n_theta) * n_phi;
  return n;
}

Vec SphereGrid::point(long long idx) const {
  Vec v(d);
  if (d == 1) {
    v(0) = 1.0;
    return v;
  }
  std::vector<double> th(d - 1), ph(d - 1);
  for (int k = 0; k < d - 1; ++k) {
    th[k] = (static_cast<double>(idx % n_theta) + 0.5) * (std::numbers::pi / 2) / n_theta;
    idx /= n_theta;
    ph[k] = (static_cast<double>(idx % n_phi) + 0.5) * 2 * std::numbers::pi / n_phi;
    idx /= n_phi;
  }
  // first amplitude real, the rest carry one phase each
  v(0) = std::cos(th[0]);
  double carry = 1.0;
  for (int k = 1; k < d; ++k) {
    carry *= std::sin(th[k - 1]);
    v(k) = carry * (k < d - 1 ? std::cos(th[k]) : 1.0) * std::polar(1.0, ph[k - 1]);
  }
  return v;
}

double SphereGrid::covering_radius() const {
  // each angular coordinate moves the point at unit speed at most
  return (d - 1) * ((std::numbers::pi / 4) / n_theta + std::numbers::pi / n_phi);
}

namespace {

double grid_value(const Mat& M, int dAp, int dA, const Vec& g, bool grid_first) {
  const Mat R = grid_first ? contract_first(M, dAp, dA, g) : contract_second(M, dAp, dA, g);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (R + R.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(R.rows() - 1);
}

}  // namespace

GridScan grid_scan_serial(const Mat& M, int dAp, int dA, const SphereGrid& g, bool grid_first) {
  GridScan best;
  const long long n = g.size();
  for (long long i = 0; i < n; ++i) {
    const double v = grid_value(M, dAp, dA, g.point(i), grid_first);
    if (v > best.max) best = {v, i};
  }
  return best;
}

GridScan grid_scan(const Mat& M, int dAp, int dA, const SphereGrid& g, bool grid_first) {
  GridScan best;
  const long long n = g.size();
#pragma omp parallel
  {
    GridScan local;
#pragma omp for schedule(static)
    for (long long i = 0; i < n; ++i) {
      const double v = grid_value(M, dAp, dA, g.point(i), grid_first);
      if (v > local.max) local = {v, i};
    }
#pragma omp critical
    {
      if (local.max > best.max || (local.max == best.max && local.argmax < best.argmax)) best = local;
    }
  }
  return best;
}

}  // namespace kernels

std::string to_string(PnrMethod m) {
  switch (m) {
    case PnrMethod::seesaw: return "seesaw";
    case PnrMethod::grid: return "grid";
    case PnrMethod::closed_form: return "closed_form";
  }
  return "?";
}

namespace {

void require_bipartite_hermitian(const Operator& m, const char* who) {
  if (m.n_sys() != 2) throw ArgumentError(std::string(who) + ": operator must be bipartite");
  if (!m.is_hermitian()) throw ContractViolation(std::string(who) + ": operator is not Hermitian");
}

std::vector<Vec> random_starts(int d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Vec> out;
  out.reserve(n);
  for (int s = 0; s < n; ++s) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = cplx(nd(rng), nd(rng));
    out.push_back(v.normalized());
  }
  return out;
}

}  // namespace

GridBracket pnr_grid_oracle(const Operator& m, double mesh, const PnrConfig& cfg) {
  require_bipartite_hermitian(m, "pnr_grid_oracle");
  const int dAp = m.dims()[0], dA = m.dims()[1];
  if (dAp * dA > 16) {
    std::ostringstream os;
    os << "pnr_grid_oracle: total dimension " << dAp * dA << " exceeds the guard of 16";
    throw RefusalError(os.str());
  }
  if (!(mesh > 0)) throw ArgumentError("pnr_grid_oracle: mesh must be positive");
  const bool grid_first = dAp < dA;
  kernels::SphereGrid g;
  g.d = grid_first ? dAp : dA;
  g.n_theta = std::max(1, static_cast<int>(std::ceil((std::numbers::pi / 2) / mesh)));
  g.n_phi = std::max(1, static_cast<int>(std::ceil(2 * std::numbers::pi / mesh)));
  if (g.size() > 50'000'000LL) throw RefusalError("pnr_grid_oracle: grid too large for this mesh");

  const Mat& M = m.mat();
  const auto scan = cfg.exec == Exec::parallel ? kernels::grid_scan(M, dAp, dA, g, grid_first)
                                               : kernels::grid_scan_serial(M, dAp, dA, g, grid_first);
  GridBracket br;
  br.points = g.size();
  br.grid_max = scan.max;
  br.radius = g.d > 1 ? g.covering_radius() : 0.0;
  br.upper = std::min(scan.max + 2 * spectral_norm(M) * br.radius, lambda_max(M));

  // polish: seesaw started from the best grid point
  const Vec gp = g.point(scan.argmax);
  Vec b0 = gp;
  if (grid_first) {
    Eigen::SelfAdjointEigenSolver<Mat> es(kernels::contract_first(M, dAp, dA, gp));
    b0 = es.eigenvectors().col(dA - 1);
  }
  const auto run = kernels::seesaw_from(M, dAp, dA, b0, cfg.tol, cfg.max_iter);
  br.lower = std::max(run.value, scan.max);
  br.a = run.a;
  br.b = run.b;
  br.upper = std::max(br.upper, br.lower);
  return br;
}

PnrResult product_numerical_range(const Operator& m, const PnrConfig& cfg) {
  require_bipartite_hermitian(m, "product_numerical_range");
  const int dAp = m.dims()[0], dA = m.dims()[1];
  const auto starts = random_starts(dA, std::max(1, cfg.restarts), cfg.seed);
  const Mat& M = m.mat();
  const auto runs = cfg.exec == Exec::parallel
                        ? kernels::seesaw_multistart(M, dAp, dA, starts, cfg.tol, cfg.max_iter)
                        : kernels::seesaw_multistart_serial(M, dAp, dA, starts, cfg.tol, cfg.max_iter);
  const auto& best = kernels::best_run(runs);

  PnrResult r;
  r.value = best.value;
  r.a = best.a;
  r.b = best.b;
  r.lower_bound = best.value;
  r.upper_bound = lambda_max(M);
  r.method = PnrMethod::seesaw;
  r.restarts = static_cast<int>(starts.size());
  if (cfg.grid) {
    const auto br = pnr_grid_oracle(m, cfg.mesh, cfg);
    if (br.lower > r.value) {
      r.value = r.lower_bound = br.lower;
      r.a = br.a;
      r.b = br.b;
      r.method = PnrMethod::grid;
    }
    r.upper_bound = std::min(r.upper_bound, br.upper);
  }
  r.upper_bound = std::max(r.upper_bound, r.value);
  return r;
}

}  // namespace qb

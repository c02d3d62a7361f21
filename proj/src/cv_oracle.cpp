#include <cmath>
#include <sstream>

#include "qbench/cv.hpp"
#include "qbench/quadrature.hpp"

namespace qb {

namespace {

struct NodeValue {
  double f = 0, p = 0, leak = 0;
};

}  // namespace

OracleResult average_fidelity_oracle(const Channel& device, const CvParams& p, const FockCutoff& cut,
                                     const OracleConfig& cfg) {
  p.validate();
  cut.validate();
  const int n = cut.n_max;
  if (device.dim_in() != n || device.dim_out() != n) throw ArgumentError("average_fidelity_oracle: device dimension differs from the cutoff");

  const auto alphas = gaussian_plane_rule(cfg.nodes, p.lambda);
  const std::vector<ComplexNode> betas =
      p.pure() ? std::vector<ComplexNode>{{0.0, 1.0}} : gaussian_plane_rule(cfg.beta_nodes, p.mu);

  // y_K = K^dag |target> for all K at once: target^dag [K_1 ... K_m]
  const auto& ks = device.kraus();
  const int m = static_cast<int>(ks.size());
  Mat wide(n, static_cast<Eigen::Index>(n) * m);
  for (int k = 0; k < m; ++k) wide.middleCols(static_cast<Eigen::Index>(k) * n, n) = ks[k];
  const Mat E = device.kraus_sum();

  std::vector<NodeValue> out(alphas.size());
  auto body = [&](size_t i) {
    const cplx a = alphas[i].z;
    const cplx tgt_amp = p.g * (p.conjugate ? std::conj(a) : a);
    const Vec target = coherent_amplitudes(tgt_amp, n);
    NodeValue v;
    v.leak = coherent_leakage(std::norm(tgt_amp), n);
    Mat rho = Mat::Zero(n, n);
    for (const auto& b : betas) {
      const Vec in = coherent_amplitudes(a + b.z, n);
      rho.noalias() += b.w * in * in.adjoint();
      v.leak += b.w * coherent_leakage(std::norm(a + b.z), n);
    }
    const Eigen::RowVectorXcd row = target.adjoint() * wide;
    const Mat Y = Eigen::Map<const Mat>(row.data(), n, m).conjugate();
    v.f = (rho * Y).cwiseProduct(Y.conjugate()).sum().real();
    v.p = (E * rho).trace().real();
    out[i] = v;
  };
  const long na = static_cast<long>(alphas.size());
  if (cfg.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < na; ++i) body(static_cast<size_t>(i));
  } else {
    for (long i = 0; i < na; ++i) body(static_cast<size_t>(i));
  }

  OracleResult r;
  r.nodes = static_cast<int>(alphas.size() * betas.size());
  double F = 0;
  for (size_t i = 0; i < alphas.size(); ++i) {
    F += alphas[i].w * out[i].f;
    r.p_succ += alphas[i].w * out[i].p;
    r.leakage += alphas[i].w * out[i].leak;
  }
  if (r.leakage > cfg.guard_tol) {
    // smallest cutoff meeting the guard, from the leakage model alone
    int want = n;
    auto leak_at = [&](int nn) {
      double L = 0;
      for (const auto& a : alphas) {
        double l = coherent_leakage(std::norm(p.g * a.z), nn);
        for (const auto& b : betas) l += b.w * coherent_leakage(std::norm(a.z + b.z), nn);
        L += a.w * l;
      }
      return L;
    };
    while (leak_at(want) > cfg.guard_tol && want < 100000) want += std::max(1, want / 8);
    std::ostringstream os;
    os << "average_fidelity_oracle: prior-weighted truncation leakage " << r.leakage << " at n_max = " << n
       << " exceeds " << cfg.guard_tol << "; use n_max >= " << want;
    throw CutoffError(os.str(), want);
  }
  if (r.p_succ <= 0) throw VanishingSuccess("average_fidelity_oracle: device never succeeds on the prior");
  r.value = F / r.p_succ;
  return r;
}

double heterodyne_weight(cplx gamma, double theta) {
  const double t = std::tanh(theta), s = std::sinh(theta);
  return std::exp(-std::norm(gamma) / (s * s)) / (t * t);
}

double heterodyne_expectation(const Mat& rho, double theta, int nodes) {
  const int n = static_cast<int>(rho.rows());
  const double T = std::tanh(std::abs(theta));
  if (T == 0) return rho(0, 0).real();
  // w(g) <g|rho|g> = T^{-2} e^{-|g|^2/T^2} P(g) with P polynomial; the plane rule with s = 1/T^2 absorbs T^{-2}
  double acc = 0;
  Vec v(n);
  for (const auto& nd : gaussian_plane_rule(nodes, 1.0 / (T * T), 0.0)) {
    v(0) = 1.0;
    for (int k = 1; k < n; ++k) v(k) = v(k - 1) * nd.z / std::sqrt(static_cast<double>(k));
    acc += nd.w * v.dot(rho * v).real();
  }
  return acc;
}

}  // namespace qb

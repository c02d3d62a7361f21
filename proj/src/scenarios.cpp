#include "qbench/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "qbench/cv.hpp"

namespace qb {

Operator teleport_omega(int d) {
  if (d < 2) throw ArgumentError("teleport_omega: d must be at least 2");
  const int n = d * d;
  Mat swap = Mat::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  const Mat sym = 0.5 * (Mat::Identity(n, n) + swap);
  return Operator({d, d}, sym / (0.5 * d * (d + 1)));
}

DetTest teleport_det_test(int d) {
  Vec phi = Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  const Operator omega = teleport_omega(d);
  return DetTest(Operator({d, d}, phi * phi.adjoint()), partial_transpose(omega, 1) * static_cast<double>(d));
}

Operator chsh_observable() {
  const double s = 1.0 / std::sqrt(2.0);
  const Mat xt = s * (pauli_z() + pauli_x());
  const Mat zt = s * (pauli_z() - pauli_x());
  return Operator({2, 2}, std::sqrt(2.0) * (kron(xt, xt) + kron(zt, zt)));
}

Operator chsh_omega() { return chsh_observable() * 0.5; }

Ensemble equator_ensemble(int n) {
  if (n < 1) throw ArgumentError("equator_ensemble: need at least one state");
  Ensemble e;
  for (int k = 0; k < n; ++k) {
    Vec v(2);
    v << 1.0, std::polar(1.0, 2 * std::numbers::pi * k / n);
    v /= std::sqrt(2.0);
    e.targets.emplace_back(Dims{2}, v);
    e.states.push_back(e.targets.back().projector());
    e.probs.push_back(1.0 / n);
  }
  // keep the sum exactly 1 for the normalization check
  double acc = 0;
  for (int k = 0; k + 1 < n; ++k) acc += e.probs[k];
  e.probs.back() = 1.0 - acc;
  return e;
}

Operator equator_omega() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.25;
  // |Psi+><Psi+| / 2
  m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = 0.25;
  return Operator({2, 2}, m);
}

Ensemble coherent_ensemble(const std::vector<std::complex<double>>& alphas, int n_max, double leak_tol) {
  Ensemble e;
  const FockCutoff cut{n_max, leak_tol};
  for (const auto& a : alphas) {
    e.targets.push_back(coherent_state(a, cut));
    e.states.push_back(e.targets.back().projector());
    e.probs.push_back(1.0 / static_cast<double>(alphas.size()));
  }
  return e;
}

}  // namespace qb

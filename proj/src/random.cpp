#include "qbench/random.hpp"

namespace qb {

Mat random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  return g;
}

Mat random_hermitian(int d, Rng& rng) {
  const Mat g = random_ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

Mat random_unitary(int d, Rng& rng) {
  const Eigen::HouseholderQR<Mat> qr(random_ginibre(d, d, rng));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  // fix the phases so the distribution is Haar
  for (int j = 0; j < d; ++j) {
    const cplx dj = r(j, j);
    if (std::abs(dj) > 0) q.col(j) *= dj / std::abs(dj);
  }
  return q;
}

Vec random_unit_vector(int d, Rng& rng) {
  const Vec v = random_ginibre(d, 1, rng);
  return v / v.norm();
}

Operator random_density(const Dims& dims, Rng& rng, int rank) {
  const int d = dims_product(dims);
  const Mat g = random_ginibre(d, rank > 0 ? rank : d, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return Operator(dims, 0.5 * (rho + rho.adjoint()));
}

Channel random_channel(int d_in, int d_out, int n_kraus, Rng& rng, bool trace_preserving) {
  if (n_kraus * d_out < d_in) throw ArgumentError("random_channel: need n_kraus * d_out >= d_in");
  const Mat g = random_ginibre(n_kraus * d_out, d_in, rng);
  Mat v = g * psd_inv_sqrt(g.adjoint() * g);
  if (!trace_preserving) {
    std::uniform_real_distribution<double> ud(0.05, 0.95);
    const Mat u = random_unitary(d_in, rng);
    RVec q(d_in);
    for (int i = 0; i < d_in; ++i) q(i) = std::sqrt(ud(rng));
    v = v * u * q.cast<cplx>().asDiagonal() * u.adjoint();
  }
  std::vector<Mat> ks;
  for (int k = 0; k < n_kraus; ++k) ks.push_back(v.middleRows(k * d_out, d_out));
  return Channel(std::move(ks), trace_preserving, 1e-9);
}

}  // namespace qb

#include <cmath>
#include <numbers>

#include "qbench/cv.hpp"

namespace qb {

namespace {

// Eigenfunctions of the quadrature (a + a^dag)/2, whose vacuum variance is 1/4.
Eigen::VectorXd hermite_functions(double x, int n) {
  Eigen::VectorXd h(n);
  const double y = std::sqrt(2.0) * x;
  h(0) = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x);
  if (n > 1) h(1) = std::sqrt(2.0) * y * h(0);
  for (int k = 1; k + 1 < n; ++k) h(k + 1) = std::sqrt(2.0 / (k + 1)) * y * h(k) - std::sqrt(k / (k + 1.0)) * h(k - 1);
  return h;
}

}  // namespace

HomodyneSampler::HomodyneSampler(const Mat& rho, std::uint64_t seed, int grid) : rng_(seed) {
  n_ = static_cast<int>(rho.rows());
  if (rho.cols() != n_ || n_ < 1) throw ArgumentError("HomodyneSampler: rho must be square");
  if (grid < 11) throw ArgumentError("HomodyneSampler: grid too coarse");
  const EigResult eig = hermitian_eig(rho);
  half_width_ = std::sqrt(n_ + 0.5) + 4.0;
  step_ = 2 * half_width_ / (grid - 1);
  grid_x_ = RVec::LinSpaced(grid, -half_width_, half_width_);
  wave_.resize(grid, n_);
  for (int g = 0; g < grid; ++g) wave_.row(g) = hermite_functions(grid_x_(g), n_).transpose();

  // 50:50 splitter with vacuum; angle sign chosen so |a,0> -> |a/sqrt2, a/sqrt2>
  const double phi = -std::numbers::pi / 4;
  for (int i = 0; i < n_; ++i) {
    const double w = eig.values(i);
    if (w <= 1e-14) continue;
    const Vec v = eig.vectors.col(i);
    Mat psi = Mat::Zero(n_, n_);
    for (int k = 0; k < n_; ++k) {
      const Eigen::MatrixXd U = beamsplitter_sector(phi, k);
      for (int b = 0; b <= k; ++b) psi(k - b, b) += v(k) * U(b, 0);
    }
    const Mat phi_x = wave_.cast<cplx>() * psi;  // rows: x, columns: mode-2 level
    std::vector<double> dens(grid);
    for (int g = 0; g < grid; ++g) dens[g] = phi_x.row(g).squaredNorm();
    weights_.push_back(w);
    split_.push_back(std::move(psi));
    x_density_.push_back(std::move(dens));
  }
  if (weights_.empty()) throw ArgumentError("HomodyneSampler: rho has no positive weight");
}

double HomodyneSampler::draw(const std::vector<double>& density) {
  std::discrete_distribution<int> pick(density.begin(), density.end());
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const int g = pick(rng_);
  return grid_x_(g) + step_ * jitter(rng_);
}

cplx HomodyneSampler::sample() {
  std::discrete_distribution<int> comp(weights_.begin(), weights_.end());
  const int c = comp(rng_);
  const double x = draw(x_density_[c]);
  // conditional mode-2 state after the x outcome, rotated into the p representation
  const Vec cond = (hermite_functions(x, n_).transpose().cast<cplx>() * split_[c]).transpose();
  Vec rot(n_);
  cplx ph = 1.0;
  for (int b = 0; b < n_; ++b, ph *= cplx(0, -1)) rot(b) = ph * cond(b);
  const Vec amp = wave_.cast<cplx>() * rot;
  std::vector<double> dens(amp.size());
  for (Eigen::Index g = 0; g < amp.size(); ++g) dens[g] = std::norm(amp(g));
  const double p = draw(dens);
  return std::sqrt(2.0) * cplx(x, p);
}

std::vector<cplx> HomodyneSampler::sample(int shots) {
  if (shots < 0) throw ArgumentError("HomodyneSampler: negative shot count");
  std::vector<cplx> out;
  out.reserve(shots);
  for (int i = 0; i < shots; ++i) out.push_back(sample());
  return out;
}

}  // namespace qb

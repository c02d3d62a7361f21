#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbench/cv.hpp"
#include "qbench/quadrature.hpp"

namespace qb {

void FockCutoff::validate() const {
  if (n_max < 1) throw ArgumentError("FockCutoff: n_max must be positive");
  if (!(leak_tol > 0 && leak_tol < 1)) throw ArgumentError("FockCutoff: leak_tol must lie in (0, 1)");
}

double CvParams::x() const {
  if (pure()) return 1.0 / (1.0 + lambda);
  return (lambda + mu) / (lambda + mu + lambda * mu);
}

double CvParams::k() const {
  if (pure()) return std::sqrt(x());
  return mu * std::sqrt(x()) / (lambda + mu);
}

double CvParams::nu() const {
  if (pure() || g == 0) return std::numeric_limits<double>::infinity();
  return (lambda + mu) / (g * g);
}

void CvParams::validate() const {
  if (!(g >= 0) || !std::isfinite(g)) throw ArgumentError("CvParams: g must be finite and >= 0");
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ArgumentError("CvParams: lambda must be finite and > 0");
  if (!(mu > 0)) throw ArgumentError("CvParams: mu must be > 0 (use infinity for pure inputs)");
}

SectorOp::SectorOp(SectorKind kind, int n_max) : kind_(kind), n_(n_max) {
  if (n_max < 1) throw ArgumentError("SectorOp: n_max must be positive");
  blocks_.resize(static_cast<size_t>(sector_max() - sector_min() + 1));
  for (int s = sector_min(); s <= sector_max(); ++s) block(s) = Mat::Zero(size(s), size(s));
}

int SectorOp::r_first(int s) const {
  if (kind_ == SectorKind::difference) return std::max(0, -s);
  return std::max(0, s - n_ + 1);
}

int SectorOp::size(int s) const {
  if (kind_ == SectorKind::difference) return n_ - std::abs(s);
  return std::min(s, n_ - 1) - r_first(s) + 1;
}

Mat SectorOp::dense() const {
  const int d = n_ * n_;
  Mat out = Mat::Zero(d, d);
  for (int s = sector_min(); s <= sector_max(); ++s) {
    const Mat& b = block(s);
    const int r0 = r_first(s);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) {
        const int r = r0 + i, q = r0 + j;
        out(partner(s, r) * n_ + r, partner(s, q) * n_ + q) = b(i, j);
      }
  }
  return out;
}

cplx SectorOp::sandwich(const Mat& M) const {
  if (M.rows() != n_ || M.cols() != n_) throw ArgumentError("SectorOp::sandwich: amplitude matrix has wrong size");
  cplx acc = 0;
  Vec v;
  for (int s = sector_min(); s <= sector_max(); ++s) {
    const int r0 = r_first(s), m = size(s);
    v.resize(m);
    for (int i = 0; i < m; ++i) v(i) = M(partner(s, r0 + i), r0 + i);
    acc += v.dot(block(s) * v);
  }
  return acc;
}

double SectorOp::max_abs_diff(const SectorOp& o) const {
  if (o.kind_ != kind_ || o.n_ != n_) throw ArgumentError("SectorOp::max_abs_diff: layouts differ");
  double m = 0;
  for (int s = sector_min(); s <= sector_max(); ++s)
    if (size(s) > 0) m = std::max(m, (block(s) - o.block(s)).cwiseAbs().maxCoeff());
  return m;
}

Vec coherent_amplitudes(cplx alpha, int n_max) {
  Vec v = Vec::Zero(n_max);
  const double r = std::abs(alpha);
  if (r == 0) {
    v(0) = 1.0;
    return v;
  }
  // log-space keeps large amplitudes finite
  const double lr = std::log(r), ph = std::arg(alpha);
  for (int n = 0; n < n_max; ++n)
    v(n) = std::polar(std::exp(-0.5 * r * r + n * lr - 0.5 * std::lgamma(n + 1.0)), n * ph);
  return v;
}

double coherent_leakage(double abs2, int n_max) {
  if (abs2 <= 0) return 0.0;
  return gsl_sf_gamma_inc_P(static_cast<double>(n_max), abs2);
}

int suggest_cutoff_coherent(double abs2, double leak_tol) {
  int n = 1;
  while (coherent_leakage(abs2, n) > leak_tol && n < 1000000) n = n < 64 ? n + 1 : n + n / 8;
  return n;
}

PureState coherent_state(cplx alpha, const FockCutoff& cut) {
  cut.validate();
  const double leak = coherent_leakage(std::norm(alpha), cut.n_max);
  if (leak > cut.leak_tol) {
    const int n = suggest_cutoff_coherent(std::norm(alpha), cut.leak_tol);
    std::ostringstream os;
    os << "coherent_state: leakage " << leak << " beyond n_max = " << cut.n_max << " exceeds " << cut.leak_tol
       << "; use n_max >= " << n;
    throw CutoffError(os.str(), n);
  }
  Vec v = coherent_amplitudes(alpha, cut.n_max);
  return PureState({cut.n_max}, v / v.norm());
}

Operator thermal_state(double mean_photons, int n_max) {
  if (!(mean_photons >= 0)) throw ArgumentError("thermal_state: mean photon number must be >= 0");
  const double y = mean_photons / (1.0 + mean_photons);
  Mat m = Mat::Zero(n_max, n_max);
  for (int n = 0; n < n_max; ++n) m(n, n) = (1.0 - y) * std::pow(y, n);
  return Operator({n_max}, m);
}

Mat displacement(cplx alpha, int n_max) {
  // <j+k|D|j> = f_j^(k) e^{ik phi},  <j|D|j+k> = f_j^(k) (-e^{-i phi})^k,  with the normalized Laguerre
  // functions f_j^(k) = sqrt(j!/(j+k)!) e^{-x/2} x^{k/2} L_j^(k)(x), x = |alpha|^2, run forward in j.
  const double x = std::norm(alpha), phi = std::arg(alpha);
  Mat D = Mat::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) {
    double fm = 0, f;
    if (x == 0)
      f = k == 0 ? 1.0 : 0.0;
    else
      f = std::exp(-0.5 * x + 0.5 * k * std::log(x) - 0.5 * std::lgamma(k + 1.0));
    const cplx lower = std::polar(1.0, k * phi), upper = std::polar(1.0, k * (std::numbers::pi - phi));
    for (int j = 0; j + k < n_max; ++j) {
      D(j + k, j) = f * lower;
      if (k) D(j, j + k) = f * upper;
      const double fn = ((2 * j + 1 + k - x) * f - std::sqrt(double(j) * (j + k)) * fm) / std::sqrt((j + 1.0) * (j + k + 1.0));
      fm = f;
      f = fn;
    }
  }
  return D;
}

namespace {

void check_state_leakage(double leak, const FockCutoff& cut, const char* who, int suggestion) {
  if (leak > cut.leak_tol) {
    std::ostringstream os;
    os << who << ": leakage " << leak << " beyond n_max = " << cut.n_max << " exceeds " << cut.leak_tol
       << "; use n_max >= " << suggestion;
    throw CutoffError(os.str(), suggestion);
  }
}

}  // namespace

Operator displaced_thermal(cplx alpha, double mu, const FockCutoff& cut) {
  cut.validate();
  if (!(mu > 0)) throw ArgumentError("displaced_thermal: mu must be positive");
  if (std::isinf(mu)) return coherent_state(alpha, cut).projector();
  const double y = 1.0 / (1.0 + mu);  // thermal ratio for mean photon number 1/mu
  // internal levels until the thermal tail is negligible
  int n_int = cut.n_max;
  while (std::pow(y, n_int) > 1e-18 && n_int < cut.n_max + 2000) ++n_int;
  n_int += static_cast<int>(std::ceil(std::norm(alpha) + 10 * std::abs(alpha)));
  const Mat D = displacement(alpha, n_int);
  RVec p(n_int);
  for (int n = 0; n < n_int; ++n) p(n) = (1.0 - y) * std::pow(y, n);
  const Mat Dl = D.topRows(cut.n_max);
  Mat rho = Dl * p.asDiagonal() * Dl.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double leak = 1.0 - rho.trace().real();
  if (leak > cut.leak_tol) {
    int n = cut.n_max;
    while (n < n_int && 1.0 - (D.topRows(n) * p.asDiagonal() * D.topRows(n).adjoint()).trace().real() > cut.leak_tol)
      n += std::max(1, n / 8);
    check_state_leakage(leak, cut, "displaced_thermal", n);
  }
  return Operator({cut.n_max}, rho);
}

Operator displaced_thermal_quadrature(cplx alpha, double mu, int n_max, int nodes_per_axis) {
  if (!(mu > 0) || std::isinf(mu)) throw ArgumentError("displaced_thermal_quadrature: mu must be finite and positive");
  Mat rho = Mat::Zero(n_max, n_max);
  for (const auto& nd : gaussian_plane_rule(nodes_per_axis, mu)) {
    const Vec v = coherent_amplitudes(alpha + nd.z, n_max);
    rho += nd.w * v * v.adjoint();
  }
  return Operator({n_max}, 0.5 * (rho + rho.adjoint()));
}

PureState tmsv(double x, const FockCutoff& cut) {
  cut.validate();
  if (!(x >= 0 && x < 1)) throw ArgumentError("tmsv: x must lie in [0, 1)");
  const int n = cut.n_max;
  const double leak = std::pow(x, n);
  if (leak > cut.leak_tol) {
    const int want = static_cast<int>(std::ceil(std::log(cut.leak_tol) / std::log(x)));
    std::ostringstream os;
    os << "tmsv: squeezed-vacuum weight " << leak << " beyond n_max = " << n << " exceeds " << cut.leak_tol
       << " (x = " << x << "); use n_max >= " << want;
    throw CutoffError(os.str(), want);
  }
  Vec amp = Vec::Zero(n * n);
  for (int k = 0; k < n; ++k) amp(k * n + k) = std::sqrt((1.0 - x) * std::pow(x, k));
  return PureState({n, n}, amp / amp.norm());
}

}  // namespace qb

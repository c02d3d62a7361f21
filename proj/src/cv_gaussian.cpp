#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbench/cv.hpp"
#include "qbench/quadrature.hpp"

namespace qb {

namespace {

using RMat = Eigen::MatrixXd;

// Generator of theta(ab - a^dag b^dag) on difference sector s, levels below n.
RMat squeezer_generator(double theta, int s, int n) {
  const int r0 = std::max(0, -s), m = n - std::abs(s);
  RMat T = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double r = r0 + i, a = r + s;
    if (i > 0) T(i - 1, i) = theta * std::sqrt(a * r);
    if (i + 1 < m) T(i + 1, i) = -theta * std::sqrt((a + 1) * (r + 1));
  }
  return T;
}

}  // namespace

SectorOp two_mode_squeezer(double theta, int n_max) {
  SectorOp S(SectorKind::difference, n_max);
  double worst = 0;
  for (int s = S.sector_min(); s <= S.sector_max(); ++s) {
    const RMat U = squeezer_generator(theta, s, n_max).exp();
    S.block(s) = U.cast<cplx>();
    const int r0 = S.r_first(s), last = static_cast<int>(U.rows()) - 1;
    for (int i = 0; i <= last; ++i) {
      const int r = r0 + i;
      if (2 * r < n_max && 2 * (r + s) < n_max) worst = std::max(worst, U(last, i) * U(last, i));
    }
  }
  S.quality = worst;
  return S;
}

SectorOp squeezer_observable(double tanh_theta, bool g_on_first, int n_max, int n_internal) {
  if (!(tanh_theta >= 0 && tanh_theta < 1)) throw ArgumentError("squeezer_observable: tanh(theta) must lie in [0, 1)");
  if (n_internal < n_max) throw ArgumentError("squeezer_observable: internal cutoff below n_max");
  const double theta = std::atanh(tanh_theta), t2 = tanh_theta * tanh_theta;
  SectorOp O(SectorKind::difference, n_max);
  for (int s = O.sector_min(); s <= O.sector_max(); ++s) {
    const RMat U = squeezer_generator(theta, s, n_internal).exp();
    const int r0 = O.r_first(s);
    RVec G(U.rows());
    for (int i = 0; i < G.size(); ++i) G(i) = std::pow(t2, g_on_first ? r0 + i + s : r0 + i);
    const RMat full = U.transpose() * G.asDiagonal() * U;
    const int m = O.size(s);
    O.block(s) = full.topLeftCorner(m, m).cast<cplx>();
  }
  return O;
}

RMat beamsplitter_sector(double phi, int total) {
  const int m = total + 1;
  RMat G = RMat::Zero(m, m);
  for (int r = 0; r < m; ++r) {
    const double a = total - r;
    if (r > 0) G(r - 1, r) = phi * std::sqrt((a + 1) * r);
    if (r + 1 < m) G(r + 1, r) = -phi * std::sqrt(a * (r + 1));
  }
  return G.exp();
}

SectorOp beamsplitter(double t, int n_max) {
  if (!(t >= 0 && t <= 1)) throw ArgumentError("beamsplitter: transmissivity must lie in [0, 1]");
  const double phi = std::acos(std::sqrt(t));
  SectorOp U(SectorKind::sum, n_max);
  for (int s = U.sector_min(); s <= U.sector_max(); ++s) {
    const RMat full = beamsplitter_sector(phi, s);
    U.block(s) = full.block(U.r_first(s), U.r_first(s), U.size(s), U.size(s)).cast<cplx>();
  }
  return U;
}

RVec gaussian_observable_diag(double theta, int n_max) {
  const double t2 = std::tanh(theta) * std::tanh(theta);
  RVec d(n_max);
  for (int n = 0; n < n_max; ++n) d(n) = std::pow(t2, n);
  return d;
}

Operator gaussian_observable(double theta, const FockCutoff& cut) {
  cut.validate();
  return Operator({cut.n_max}, gaussian_observable_diag(theta, cut.n_max).cast<cplx>().asDiagonal());
}

namespace {

// D(r e^{i phi}) = R(phi) D(r) R(phi)^dag with R(phi) = e^{i phi n}.
Mat rotated(const Mat& D, double phi) {
  const int n = static_cast<int>(D.rows());
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = D(i, j) * std::polar(1.0, (i - j) * phi);
  return out;
}

}  // namespace

NoiseChannel additive_noise_channel(double nu, const FockCutoff& cut, int n_radial, int n_phi) {
  cut.validate();
  const int n = cut.n_max;
  if (std::isinf(nu)) return {Channel::identity(n), 0.0};
  if (!(nu > 0)) throw ArgumentError("additive_noise_channel: nu must be positive");
  if (n_phi <= 0) n_phi = 2 * n;
  const auto rule = gauss_laguerre(n_radial);
  std::vector<Mat> kraus;
  kraus.reserve(static_cast<size_t>(n_radial) * n_phi);
  for (int i = 0; i < n_radial; ++i) {
    const Mat D = displacement(std::sqrt(rule.nodes[i] / nu), n);
    const double w = std::sqrt(rule.weights[i] / n_phi);
    for (int k = 0; k < n_phi; ++k) kraus.push_back(w * rotated(D, 2 * std::numbers::pi * k / n_phi));
  }
  Mat S = Mat::Zero(n, n);
  for (const auto& K : kraus) S.noalias() += K.adjoint() * K;
  const double top = lambda_max(0.5 * (S + S.adjoint()));
  if (top > 1.0) {
    for (auto& K : kraus) K /= std::sqrt(top);
    S /= top;
  }
  // guarded levels: the lower third, where setup inputs carry their weight
  const int low = std::max(1, n / 3);
  const double deficit =
      (Mat::Identity(low, low) - S.topLeftCorner(low, low)).cwiseAbs().maxCoeff();
  if (deficit > 1e-6) {
    std::ostringstream os;
    os << "additive_noise_channel: trace deficit " << deficit << " on levels below " << low
       << " exceeds 1e-6; use n_max >= " << 2 * n;
    throw CutoffError(os.str(), 2 * n);
  }
  return {Channel(std::move(kraus), false, 1e-9), deficit};
}

SectorOp canonical_z(double t, SectorKind kind, int n_max) {
  if (!(t >= 0) || !std::isfinite(t)) throw ArgumentError("canonical_z: t must be finite and >= 0");
  const double lt = std::log(t), l1 = std::log1p(t * t);
  auto tpow = [&](double e) { return e == 0 ? 0.0 : e * lt; };
  SectorOp Z(kind, n_max);
  for (int s = Z.sector_min(); s <= Z.sector_max(); ++s) {
    const int r0 = Z.r_first(s), m = Z.size(s);
    Mat& B = Z.block(s);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double r = r0 + i, q = r0 + j;
        const double a = Z.partner(s, r0 + i), b = Z.partner(s, r0 + j);
        // photon number of the Gaussian moment: a + q (= b + r) or the conserved sum
        const double mom = kind == SectorKind::difference ? a + q : s;
        const double e = tpow(a + b) + std::lgamma(mom + 1) - (mom + 1) * l1 -
                         0.5 * (std::lgamma(a + 1) + std::lgamma(b + 1) + std::lgamma(r + 1) + std::lgamma(q + 1));
        B(i, j) = std::exp(e);
      }
  }
  return Z;
}

SectorOp dress_with_noise(const SectorOp& z, double nu, int n_radial) {
  if (std::isinf(nu)) return z;
  if (!(nu > 0)) throw ArgumentError("dress_with_noise: nu must be positive");
  const int n = z.n_max();
  const auto rule = gauss_laguerre(n_radial);
  SectorOp out(z.kind(), n);
  for (int i = 0; i < n_radial; ++i) {
    const RMat D = displacement(std::sqrt(rule.nodes[i] / nu), n).real();
    const double w = rule.weights[i];
    for (int s = out.sector_min(); s <= out.sector_max(); ++s) {
      const int r0 = out.r_first(s), r1 = r0 + out.size(s);
      for (int sp = z.sector_min(); sp <= z.sector_max(); ++sp) {
        const int q0 = z.r_first(sp), q1 = q0 + z.size(sp);
        const int lo = std::max(r0, q0), hi = std::min(r1, q1);
        if (hi <= lo) continue;
        const int len = hi - lo;
        RVec d(len);
        for (int k = 0; k < len; ++k) d(k) = D(out.partner(s, lo + k), z.partner(sp, lo + k));
        const RMat dd = w * d * d.transpose();
        out.block(s).block(lo - r0, lo - r0, len, len) +=
            z.block(sp).block(lo - q0, lo - q0, len, len).cwiseProduct(dd.cast<cplx>());
      }
    }
  }
  return out;
}

Channel attenuator_device(double t, int n_max) {
  if (!(t >= 0 && t <= 1)) throw ArgumentError("attenuator: transmissivity must lie in [0, 1]");
  std::vector<Mat> kraus;
  for (int l = 0; l < n_max; ++l) {
    Mat K = Mat::Zero(n_max, n_max);
    for (int n = l; n < n_max; ++n) {
      const double lb = std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
      K(n - l, n) = std::exp(0.5 * lb) * std::pow(t, 0.5 * (n - l)) * std::pow(1 - t, 0.5 * l);
    }
    kraus.push_back(std::move(K));
  }
  return Channel(std::move(kraus), true, 1e-9);
}

Channel vacuum_device(int n_max) {
  std::vector<Mat> kraus;
  for (int n = 0; n < n_max; ++n) {
    Mat K = Mat::Zero(n_max, n_max);
    K(0, n) = 1.0;
    kraus.push_back(std::move(K));
  }
  return Channel(std::move(kraus), true, 1e-9);
}

Channel heterodyne_mp_device(double g, bool conjugate, int n_max) {
  if (!(g >= 0)) throw ArgumentError("heterodyne_mp_device: gain must be >= 0");
  const int n_r = n_max / 2 + 2, n_phi = n_max;
  const auto rule = gauss_laguerre(n_r);
  std::vector<Mat> kraus;
  kraus.reserve(static_cast<size_t>(n_r) * n_phi);
  for (int i = 0; i < n_r; ++i) {
    // weight of the ring: w e^{u} / n_phi undoes the e^{-|gamma|^2} inside |gamma><gamma|
    const double W = std::exp(std::log(rule.weights[i]) + rule.nodes[i]) / n_phi;
    const double rad = std::sqrt(rule.nodes[i]);
    for (int k = 0; k < n_phi; ++k) {
      const cplx gam = std::polar(rad, 2 * std::numbers::pi * k / n_phi);
      Vec e = coherent_amplitudes(g * (conjugate ? std::conj(gam) : gam), n_max);
      e /= e.norm();
      const Vec f = coherent_amplitudes(gam, n_max);
      kraus.push_back(std::sqrt(W) * e * f.adjoint());
    }
  }
  return Channel(std::move(kraus), true, 1e-8);
}

Channel make_device(const std::string& spec, const CvParams& p, const FockCutoff& cut) {
  cut.validate();
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  auto arg = [&]() {
    if (colon == std::string::npos) throw ArgumentError("device '" + name + "' needs a parameter, e.g. " + name + ":0.5");
    try {
      size_t used = 0;
      const double v = std::stod(spec.substr(colon + 1), &used);
      if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::logic_error&) {
      throw ArgumentError("device '" + spec + "': parameter is not a number");
    }
  };
  if (name == "identity") return Channel::identity(cut.n_max);
  if (name == "scale") return Channel::scaled_identity(cut.n_max, arg());
  if (name == "attenuator") return attenuator_device(arg(), cut.n_max);
  if (name == "vacuum") return vacuum_device(cut.n_max);
  if (name == "heterodyne-mp") return heterodyne_mp_device(p.g, p.conjugate, cut.n_max);
  throw ArgumentError("unknown device '" + spec + "' (identity, scale:q, attenuator:t, vacuum, heterodyne-mp)");
}

}  // namespace qb

#include "qbench/tensor.hpp"

#include <algorithm>
#include <sstream>

namespace qb {

int dims_product(const Dims& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

namespace {

std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

}  // namespace

Operator::Operator(Dims dims, Mat m) : dims_(std::move(dims)), m_(std::move(m)) {
  if (dims_.empty()) throw ArgumentError("operator needs at least one subsystem");
  for (int d : dims_)
    if (d <= 0) throw ArgumentError("subsystem dimensions must be positive");
  const int n = dims_product(dims_);
  if (m_.rows() != n || m_.cols() != n) {
    std::ostringstream os;
    os << "matrix is " << m_.rows() << "x" << m_.cols() << " but dims give side " << n;
    throw ArgumentError(os.str());
  }
  if (!m_.allFinite()) throw ArgumentError("operator entries must be finite");
}

Operator Operator::identity(const Dims& dims) {
  const int n = dims_product(dims);
  return Operator(dims, Mat::Identity(n, n));
}

Operator Operator::zero(const Dims& dims) {
  const int n = dims_product(dims);
  return Operator(dims, Mat::Zero(n, n));
}

bool Operator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).norm() <= tol * m_.norm();
}

bool Operator::is_psd(double tol) const {
  if (!is_hermitian(tol)) return false;
  return lambda_min(m_) >= -tol;
}

bool Operator::is_unit_trace(double tol) const { return std::abs(m_.trace() - cplx(1.0)) <= tol; }

Operator Operator::operator+(const Operator& o) const {
  if (o.dims_ != dims_) throw ArgumentError("operator sum with mismatched dims");
  return Operator(dims_, m_ + o.m_);
}

Operator Operator::operator-(const Operator& o) const {
  if (o.dims_ != dims_) throw ArgumentError("operator difference with mismatched dims");
  return Operator(dims_, m_ - o.m_);
}

Operator Operator::operator*(double s) const { return Operator(dims_, m_ * s); }

PureState::PureState(Dims dims, Vec amp, double norm_tol)
    : dims_(std::move(dims)), amp_(std::move(amp)), norm_tol_(norm_tol) {
  if (amp_.size() != dims_product(dims_)) throw ArgumentError("amplitude length does not match dims");
  if (std::abs(amp_.norm() - 1.0) > norm_tol_) throw ContractViolation("state is not normalized");
}

Operator PureState::projector() const { return Operator(dims_, amp_ * amp_.adjoint()); }

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  Dims d = a.dims();
  d.insert(d.end(), b.dims().begin(), b.dims().end());
  return Operator(std::move(d), kron(a.mat(), b.mat()));
}

Operator partial_trace(const Operator& m, std::vector<int> keep) {
  const int n = m.n_sys();
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int k : keep)
    if (k < 0 || k >= n) throw ArgumentError("partial_trace: subsystem index out of range");

  const Dims& dims = m.dims();
  std::vector<bool> kept(n, false);
  for (int k : keep) kept[k] = true;
  Dims kd, td;
  for (int k = 0; k < n; ++k) (kept[k] ? kd : td).push_back(dims[k]);
  const int Dk = dims_product(kd);
  const int Dt = td.empty() ? 1 : dims_product(td);

  // full[t*Dk + p] = flat index with kept digits p and traced digits t
  std::vector<int> full(static_cast<size_t>(Dk) * Dt);
  const auto st = strides_of(dims);
  const int D = m.dim();
  for (int i = 0; i < D; ++i) {
    int p = 0, t = 0;
    for (int k = 0; k < n; ++k) {
      const int digit = (i / st[k]) % dims[k];
      if (kept[k])
        p = p * dims[k] + digit;
      else
        t = t * dims[k] + digit;
    }
    full[static_cast<size_t>(t) * Dk + p] = i;
  }

  Mat out = Mat::Zero(Dk, Dk);
  for (int t = 0; t < Dt; ++t) {
    const int* rows = &full[static_cast<size_t>(t) * Dk];
    for (int q = 0; q < Dk; ++q)
      for (int p = 0; p < Dk; ++p) out(p, q) += m.mat()(rows[p], rows[q]);
  }
  return Operator(kd, std::move(out));
}

Operator partial_transpose(const Operator& m, int sys) {
  if (sys < 0 || sys >= m.n_sys()) throw ArgumentError("partial_transpose: subsystem index out of range");
  const auto st = strides_of(m.dims());
  const int s = st[sys], d = m.dims()[sys];
  const int D = m.dim();
  Mat out(D, D);
  for (int j = 0; j < D; ++j) {
    const int js = (j / s) % d;
    for (int i = 0; i < D; ++i) {
      const int is = (i / s) % d;
      out(i + (js - is) * s, j + (is - js) * s) = m.mat()(i, j);
    }
  }
  return Operator(m.dims(), std::move(out));
}

Operator permute_subsystems(const Operator& m, const std::vector<int>& perm) {
  const int n = m.n_sys();
  if (static_cast<int>(perm.size()) != n) throw ArgumentError("permutation length mismatch");
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]++) throw ArgumentError("not a permutation");
  }
  const Dims& dims = m.dims();
  Dims nd(n);
  for (int k = 0; k < n; ++k) nd[k] = dims[perm[k]];
  const auto st = strides_of(dims);
  const auto nst = strides_of(nd);
  const int D = m.dim();
  std::vector<int> P(D);
  for (int i = 0; i < D; ++i) {
    int j = 0;
    for (int k = 0; k < n; ++k) j += ((i / st[perm[k]]) % dims[perm[k]]) * nst[k];
    P[i] = j;
  }
  Mat out(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) out(P[i], P[j]) = m.mat()(i, j);
  return Operator(nd, std::move(out));
}

Operator transpose(const Operator& m) { return Operator(m.dims(), m.mat().transpose()); }

EigResult hermitian_eig(const Mat& m, double tol) {
  if (m.rows() != m.cols()) throw ContractViolation("hermitian_eig: matrix not square");
  const double diff = (m - m.adjoint()).norm();
  if (diff > tol * m.norm()) {
    std::ostringstream os;
    os << "hermitian_eig: input not Hermitian (|m - m^dag|_F = " << diff << ")";
    throw ContractViolation(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalInconsistency("eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

EigResult hermitian_eig(const Operator& m, double tol) { return hermitian_eig(m.mat(), tol); }

Purification purify_schmidt(const Operator& rho) {
  if (rho.n_sys() != 1) throw ArgumentError("purify expects a single-system density matrix");
  const auto e = hermitian_eig(rho);
  const int d = rho.dim();
  if (e.values(0) < -kHermTol) throw ContractViolation("purify: input is not positive semidefinite");
  if (!rho.is_unit_trace()) throw ContractViolation("purify: input trace is not 1");
  const double lmax = e.values(d - 1);
  int r = 0;
  for (int i = d - 1; i >= 0 && e.values(i) > kRankTol * lmax; --i) ++r;

  Mat basis(d, r);
  RVec w(r);
  for (int n = 0; n < r; ++n) {
    basis.col(n) = e.vectors.col(d - 1 - n);
    w(n) = e.values(d - 1 - n);
  }
  // sum_n sqrt(w_n) |v_n> (x) |conj v_n> = (sqrt(rho) (x) I) sum_i |ii>, independent of the eigenbasis
  Vec amp = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int n = 0; n < r; ++n)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) amp(a * d + b) += std::sqrt(w(n)) * basis(a, n) * std::conj(basis(b, n));
  amp.normalize();  // drops the sub-tolerance tail of the spectrum
  return {PureState({d, d}, amp), basis, w};
}

PureState purify(const Operator& rho) { return purify_schmidt(rho).state; }

Mat pairing_isometry(const Operator& tau_A, const Operator& tau_R, double tol) {
  const auto ea = hermitian_eig(tau_A);
  const auto er = hermitian_eig(tau_R);
  const int da = tau_A.dim(), dr = tau_R.dim();
  auto rank_of = [](const RVec& v) {
    const double lmax = v(v.size() - 1);
    int r = 0;
    for (Eigen::Index i = v.size() - 1; i >= 0 && v(i) > kRankTol * lmax; --i) ++r;
    return r;
  };
  const int ra = rank_of(ea.values), rr = rank_of(er.values);
  if (ra != rr) {
    std::ostringstream os;
    os << "pairing_isometry: ranks differ (" << ra << " vs " << rr << ")";
    throw SpectralMismatch(os.str());
  }
  Mat T = Mat::Zero(da, dr);
  for (int n = 0; n < ra; ++n) {
    const double la = ea.values(da - 1 - n), lr = er.values(dr - 1 - n);
    if (std::abs(la - lr) > tol) {
      std::ostringstream os;
      os << "pairing_isometry: eigenvalue " << n << " differs (" << la << " vs " << lr << ")";
      throw SpectralMismatch(os.str());
    }
    T += ea.vectors.col(da - 1 - n) * er.vectors.col(dr - 1 - n).adjoint();
  }
  return T;
}

Mat psd_sqrt(const Mat& m) {
  const auto e = hermitian_eig(m);
  RVec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

Mat psd_inv_sqrt(const Mat& m, double rank_tol) {
  const auto e = hermitian_eig(m);
  const double lmax = e.values.maxCoeff();
  RVec s(e.values.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    s(i) = e.values(i) > rank_tol * lmax ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

Mat support_projector(const Mat& m, double rank_tol) {
  const auto e = hermitian_eig(m);
  const double lmax = e.values.cwiseAbs().maxCoeff();
  Mat P = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i)) > rank_tol * lmax) P += e.vectors.col(i) * e.vectors.col(i).adjoint();
  return P;
}

double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double lambda_max(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

double lambda_min(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Vec basis_ket(int d, int i) {
  Vec v = Vec::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace qb

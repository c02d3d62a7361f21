#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qbench/errors.hpp"

namespace qb {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Dims = std::vector<int>;

constexpr double kHermTol = 1e-9;
constexpr double kRankTol = 1e-12;

int dims_product(const Dims& dims);

// Dense operator on a tensor product; leftmost subsystem varies slowest.
class Operator {
 public:
  Operator() = default;
  Operator(Dims dims, Mat m);

  static Operator identity(const Dims& dims);
  static Operator zero(const Dims& dims);

  const Dims& dims() const { return dims_; }
  const Mat& mat() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int n_sys() const { return static_cast<int>(dims_.size()); }
  cplx trace() const { return m_.trace(); }

  bool is_hermitian(double tol = kHermTol) const;
  bool is_psd(double tol = kHermTol) const;
  bool is_unit_trace(double tol = kHermTol) const;

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(double s) const;

 private:
  Dims dims_;
  Mat m_;
};

class PureState {
 public:
  PureState() = default;
  PureState(Dims dims, Vec amp, double norm_tol = 1e-9);

  const Dims& dims() const { return dims_; }
  const Vec& amp() const { return amp_; }
  double norm_tol() const { return norm_tol_; }
  Operator projector() const;

 private:
  Dims dims_;
  Vec amp_;
  double norm_tol_ = 1e-9;
};

struct EigResult {
  RVec values;  // ascending
  Mat vectors;  // columns
};

// Schmidt data of the purification (sqrt(rho) (x) I) sum_i |ii> = sum_n sqrt(w_n) |basis_n> (x) |conj basis_n>.
struct Purification {
  PureState state;
  Mat basis;  // d x r, columns are eigenvectors of rho in descending order
  RVec weights;
};

Operator kron(const Operator& a, const Operator& b);
Mat kron(const Mat& a, const Mat& b);

Operator partial_trace(const Operator& m, std::vector<int> keep);
Operator partial_transpose(const Operator& m, int sys);
Operator permute_subsystems(const Operator& m, const std::vector<int>& perm);
Operator transpose(const Operator& m);

EigResult hermitian_eig(const Operator& m, double tol = kHermTol);
EigResult hermitian_eig(const Mat& m, double tol = kHermTol);

PureState purify(const Operator& rho);
Purification purify_schmidt(const Operator& rho);

Mat pairing_isometry(const Operator& tau_A, const Operator& tau_R, double tol = 1e-9);

// Helpers on Hermitian matrices. Functions of the spectrum act on the support only.
Mat psd_sqrt(const Mat& m);
Mat psd_inv_sqrt(const Mat& m, double rank_tol = kRankTol);
Mat support_projector(const Mat& m, double rank_tol = kRankTol);
double spectral_norm(const Mat& m);
double lambda_max(const Mat& m);
double lambda_min(const Mat& m);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Vec basis_ket(int d, int i);

}  // namespace qb

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qbench/json_io.hpp"
#include "qbench/parallel.hpp"
#include "qbench/test_model.hpp"

namespace qb {

// Fock levels 0..n_max-1 per mode.
struct FockCutoff {
  int n_max = 40;
  double leak_tol = 1e-8;
  void validate() const;
};

struct CvParams {
  double g = 1.0;
  double lambda = 1.0;
  double mu = std::numeric_limits<double>::infinity();
  bool conjugate = false;

  bool pure() const { return std::isinf(mu); }
  double x() const;   // TMSV parameter, thermal ratio of the average input
  double k() const;   // amplitude shrink of the noisy prior; sqrt(x) when pure
  double nu() const;  // inverse variance of the output noise; +inf when pure
  void validate() const;
};

enum class CvBranch { pure_low_gain, pure_high_gain, mixed, conjugation };
std::string to_string(CvBranch b);

// Two-mode operator stored block by block. Difference sectors hold |r+s, r>, sum sectors |s-r, r>;
// in both, the block index runs over r (the second mode's photon number).
enum class SectorKind { difference, sum };

class SectorOp {
 public:
  SectorOp() = default;
  SectorOp(SectorKind kind, int n_max);

  SectorKind kind() const { return kind_; }
  int n_max() const { return n_; }
  int sector_min() const { return kind_ == SectorKind::difference ? -(n_ - 1) : 0; }
  int sector_max() const { return kind_ == SectorKind::difference ? n_ - 1 : 2 * n_ - 2; }
  int r_first(int s) const;
  int size(int s) const;
  int partner(int s, int r) const { return kind_ == SectorKind::difference ? r + s : s - r; }

  Mat& block(int s) { return blocks_[s - sector_min()]; }
  const Mat& block(int s) const { return blocks_[s - sector_min()]; }

  Mat dense() const;
  // Expectation vec(M)^dag O vec(M) of an amplitude matrix M(a, r).
  cplx sandwich(const Mat& M) const;
  double max_abs_diff(const SectorOp& o) const;

  double quality = 0;  // truncation diagnostic of the construction (0 = exact)

 private:
  SectorKind kind_ = SectorKind::difference;
  int n_ = 0;
  std::vector<Mat> blocks_;
};

// --- states -------------------------------------------------------------

// Truncated coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!), not renormalized.
Vec coherent_amplitudes(cplx alpha, int n_max);
// Probability weight of |alpha> at Fock levels >= n_max.
double coherent_leakage(double abs2, int n_max);
int suggest_cutoff_coherent(double abs2, double leak_tol);

PureState coherent_state(cplx alpha, const FockCutoff& cut);
Operator thermal_state(double mean_photons, int n_max);
Operator displaced_thermal(cplx alpha, double mu, const FockCutoff& cut);
// Same state from the nested Gaussian rule over the noise displacement.
Operator displaced_thermal_quadrature(cplx alpha, double mu, int n_max, int nodes_per_axis = 16);
PureState tmsv(double x, const FockCutoff& cut);

// Exact matrix elements <m|D(alpha)|n> for m, n < n_max.
Mat displacement(cplx alpha, int n_max);

// --- Gaussian operations --------------------------------------------------

// exp[theta(ab - a^dag b^dag)] from the generator truncated at n_max.
// quality: largest weight a low column (r < n_max/2) leaves on the top level.
SectorOp two_mode_squeezer(double theta, int n_max);
// exp[phi(a^dag b - a b^dag)] with cos(phi)^2 = t; exact on every sum sector that fits.
SectorOp beamsplitter(double t, int n_max);

// S^dag (G (x) I) S, or S^dag (I (x) G) S when g_on_first is false, with tanh(theta) = tanh_theta.
// The squeezer is built with n_internal levels and the product restricted to n_max.
SectorOp squeezer_observable(double tanh_theta, bool g_on_first, int n_max, int n_internal);
// Beamsplitter block on the full sum sector of total photon number `total` (size total+1).
Eigen::MatrixXd beamsplitter_sector(double phi, int total);

RVec gaussian_observable_diag(double theta, int n_max);
Operator gaussian_observable(double theta, const FockCutoff& cut);

struct NoiseChannel {
  Channel channel;
  double deficit = 0;  // max |1 - <n|sum K^dag K|n>| for n < n_max/3
};
// Kraus family sqrt(w) D(delta) on a polar Gauss-Laguerre grid; nu = +inf gives the identity.
NoiseChannel additive_noise_channel(double nu, const FockCutoff& cut, int n_radial = 32, int n_phi = 0);

// Canonical fidelity observable
//   difference: int d^2b/pi |t conj(b)><t conj(b)| (x) |b><b|
//   sum:        int d^2b/pi |t b><t b| (x) |b><b|
// in closed form.
SectorOp canonical_z(double t, SectorKind kind, int n_max);

// (N_nu (x) I)(Z) on the first mode; radial Gauss-Laguerre nodes, angles integrated exactly.
SectorOp dress_with_noise(const SectorOp& z, double nu, int n_radial = 32);

// --- devices --------------------------------------------------------------

// identity | scale:q | attenuator:t | vacuum | heterodyne-mp
Channel make_device(const std::string& spec, const CvParams& p, const FockCutoff& cut);
// Heterodyne on a grid complete on the truncated space, then |g gamma> (|g conj gamma> if conjugate).
Channel heterodyne_mp_device(double g, bool conjugate, int n_max);
Channel attenuator_device(double t, int n_max);
Channel vacuum_device(int n_max);

// --- setups ---------------------------------------------------------------

struct SetupConfig {
  int n_radial = 32;              // noise dressing nodes
  bool check_realization = true;  // compare the squeezer construction with the closed form
  int realization_pad = 40;       // minimum extra Fock levels for that comparison
  int max_realization_pad = 400;  // skip the comparison beyond this
};

struct CvSetup {
  CvParams params;
  FockCutoff cutoff;
  CvBranch branch = CvBranch::pure_low_gain;
  double x = 0, k = 0, nu = 0;
  double t = 0;      // amplitude ratio of the canonical observable
  double theta = 0;  // squeezer parameter (0 for the conjugation branch)
  double weight = 1;
  std::string z_source;  // "beamsplitter" or "closed_form"
  // Squeezer-and-G_theta construction vs the observable in use, max entry difference on the
  // block with both photon numbers below n_max/2; -1 when not computed.
  double realization_residual = -1;
  std::vector<std::string> stages;
  Vec input_amplitudes;  // TMSV Schmidt coefficients
  double leakage = 0;    // TMSV weight beyond the cutoff
  SectorOp z;            // observable before noise dressing, weight included
  SectorOp observable;   // final observable on A' (x) R
};

CvSetup build_setup(const CvParams& p, const FockCutoff& cut, const SetupConfig& cfg = {});

struct SetupResult {
  double score = 0;
  double p_succ = 0;
};

SetupResult run_setup(const CvSetup& s, const Channel& device, Exec exec = Exec::parallel, double p_min = 1e-12);
// Schroedinger-side evaluation: device, then the noise channel on the output, then Z.
SetupResult run_setup_noise_first(const CvSetup& s, const Channel& device, const Channel& noise,
                                  Exec exec = Exec::parallel, double p_min = 1e-12);

// --- oracle ---------------------------------------------------------------

struct OracleConfig {
  int nodes = 24;       // Gauss-Hermite nodes per axis over alpha
  int beta_nodes = 16;  // nested rule over the noise displacement
  double guard_tol = 1e-7;
  Exec exec = Exec::parallel;
};

struct OracleResult {
  double value = 0;
  double p_succ = 0;
  double leakage = 0;  // prior-weighted truncation leakage of inputs and targets
  int nodes = 0;
};

OracleResult average_fidelity_oracle(const Channel& device, const CvParams& p, const FockCutoff& cut,
                                     const OracleConfig& cfg = {});

// --- heterodyne -----------------------------------------------------------

double heterodyne_weight(cplx gamma, double theta);
// int d^2g/pi w(g) <g|rho|g> by Gauss-Hermite; exact for rho supported on n < nodes.
double heterodyne_expectation(const Mat& rho, double theta, int nodes = 24);

// Monte-Carlo heterodyne via a 50:50 splitter and two homodyne detectors; gamma = sqrt2 (x + i p).
class HomodyneSampler {
 public:
  HomodyneSampler(const Mat& rho, std::uint64_t seed, int grid = 801);
  cplx sample();
  std::vector<cplx> sample(int shots);

 private:
  int n_;
  double half_width_, step_;
  RVec grid_x_;
  Eigen::MatrixXd wave_;              // Hermite functions on the grid, grid x n
  std::vector<double> weights_;       // eigenvalues of rho
  std::vector<Mat> split_;            // two-mode amplitudes of each eigenvector after the splitter
  std::vector<std::vector<double>> x_density_;
  std::mt19937_64 rng_;
  double draw(const std::vector<double>& density);
};

// --- JSON -----------------------------------------------------------------

json to_json(const CvParams& p);
CvParams cv_params_from_json(const json& j);
json to_json(const CvSetup& s);

}  // namespace qb

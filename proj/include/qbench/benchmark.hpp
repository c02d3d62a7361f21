#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbench/parallel.hpp"
#include "qbench/test_model.hpp"

namespace qb {

enum class PnrMethod { seesaw, grid, closed_form };
std::string to_string(PnrMethod m);

struct PnrConfig {
  int restarts = 64;
  double tol = 1e-12;
  int max_iter = 2000;
  std::uint64_t seed = 20240611;
  bool grid = false;
  double mesh = 0.05;
  Exec exec = Exec::parallel;
};

struct PnrResult {
  double value = 0;
  Vec a;  // on A'
  Vec b;  // on A
  double lower_bound = 0;
  double upper_bound = 0;
  PnrMethod method = PnrMethod::seesaw;
  int restarts = 0;
};

struct GridBracket {
  double lower = 0;
  double upper = 0;
  double grid_max = 0;
  double radius = 0;  // covering radius of the grid on the sphere
  long long points = 0;
  Vec a, b;
};

// Uniform finite group (or design) acting as U_g on A and U'_g on A'.
struct GroupRep {
  std::vector<std::pair<Mat, Mat>> elements;  // (U_g on A, U'_g on A')
  std::vector<double> weights;

  GroupRep() = default;
  GroupRep(std::vector<std::pair<Mat, Mat>> elements, std::vector<double> weights = {});
  int dim_in() const { return static_cast<int>(elements.at(0).first.rows()); }
  int dim_out() const { return static_cast<int>(elements.at(0).second.rows()); }
};

struct SearchConfig {
  PnrConfig pnr;
  int inner_restarts = 8;
  int max_evals = 6000;
  double simplex_tol = 1e-7;
  double initial_step = 0.2;
};

struct DetBenchmark {
  double value = 0;
  Operator tau_min;
  PnrResult pnr;  // Lambda at the minimizer (conjugated operator)
  PnrMethod method = PnrMethod::seesaw;
  bool converged = true;
  int evaluations = 0;
};

PnrResult product_numerical_range(const Operator& m, const PnrConfig& cfg = {});
GridBracket pnr_grid_oracle(const Operator& m, double mesh, const PnrConfig& cfg = {});

// (I (x) s^{-1/2}) Omega (I (x) s^{-1/2}) with the pseudo-inverse on the support of s.
Operator conjugate_by_inverse_sqrt(const Operator& omega, const Mat& s);
bool is_ppt(const Operator& omega, double tol = 1e-9);

DetBenchmark det_benchmark(const Operator& omega, const SearchConfig& cfg = {}, const GroupRep* rep = nullptr);
PnrResult prob_benchmark(const ProbTest& t, const PnrConfig& cfg = {});
double covariant_benchmark(const Operator& omega, const GroupRep& rep, const PnrConfig& cfg = {},
                           PnrResult* pnr_out = nullptr);
bool check_covariance(const Operator& omega, const GroupRep& rep, double tol = 1e-9, int* failing = nullptr);
bool is_irreducible(const GroupRep& rep, std::uint64_t seed = 7, double tol = 1e-8);

struct SeedVectors {
  Vec phi;  // on A
  Vec psi;  // on A'
};
Channel optimal_mp_channel(const Operator& omega, const GroupRep& rep,
                           const std::optional<SeedVectors>& seeds = std::nullopt, const PnrConfig& cfg = {});

struct Shifted {
  Operator shifted;
  double offset;
};
Shifted ppt_offset(const Operator& observable);

// Optimal probabilistic measure-and-prepare operation for (Omega, sigma_A): project on q, prepare psi.
Channel optimal_prob_mp_channel(const ProbTest& t, const PnrConfig& cfg = {});

json pnr_to_json(const PnrResult& r);
json report_json(const DetBenchmark& b, int restarts);

}  // namespace qb

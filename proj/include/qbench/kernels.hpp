#pragma once

// Hot loops with an OpenMP version and a plain serial reference of the same computation.
// Results are combined in index order, so both versions return identical values.

#include <vector>

#include "qbench/tensor.hpp"

namespace qb::kernels {

struct SeesawRun {
  double value = 0;
  Vec a, b;
  int iters = 0;
};

// <b|-contraction: dAp x dAp matrix (I (x) b)^dag M (I (x) b).
Mat contract_second(const Mat& M, int dAp, int dA, const Vec& b);
// <a|-contraction: dA x dA matrix (a (x) I)^dag M (a (x) I).
Mat contract_first(const Mat& M, int dAp, int dA, const Vec& a);

SeesawRun seesaw_from(const Mat& M, int dAp, int dA, const Vec& b0, double tol, int max_iter);

std::vector<SeesawRun> seesaw_multistart_serial(const Mat& M, int dAp, int dA, const std::vector<Vec>& starts,
                                                double tol, int max_iter);
std::vector<SeesawRun> seesaw_multistart(const Mat& M, int dAp, int dA, const std::vector<Vec>& starts,
                                         double tol, int max_iter);
// Best run; ties go to the lowest start index.
const SeesawRun& best_run(const std::vector<SeesawRun>& runs);

// Hyperspherical grid on the unit sphere of C^d with the first amplitude real.
struct SphereGrid {
  int d = 2;
  int n_theta = 1;
  int n_phi = 1;
  long long size() const;
  Vec point(long long idx) const;
  double covering_radius() const;
};

struct GridScan {
  double max = -1e300;
  long long argmax = -1;
};

// Max over grid points g of lambda_max of the contraction of M with g on the gridded factor.
GridScan grid_scan_serial(const Mat& M, int dAp, int dA, const SphereGrid& g, bool grid_first);
GridScan grid_scan(const Mat& M, int dAp, int dA, const SphereGrid& g, bool grid_first);

}  // namespace qb::kernels

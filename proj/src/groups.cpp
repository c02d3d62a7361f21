#include "qbench/groups.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace qb {

namespace {

// Fix the global phase so that the first sizeable entry is real positive.
Mat phase_normalized(const Mat& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      if (std::abs(u(i, j)) > 1e-6) return u * (std::conj(u(i, j)) / std::abs(u(i, j)));
  return u;
}

std::vector<long long> key_of(const Mat& u) {
  std::vector<long long> k;
  k.reserve(2 * u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    k.push_back(std::llround(u(i).real() * 1e6));
    k.push_back(std::llround(u(i).imag() * 1e6));
  }
  return k;
}

}  // namespace

std::vector<Mat> clifford_group(int d) {
  if (d != 2 && d != 3) throw ArgumentError("clifford_group: only d = 2 and d = 3 are tabulated");
  const cplx w = std::polar(1.0, 2 * std::numbers::pi / d);
  Mat F(d, d), S = Mat::Zero(d, d), X = Mat::Zero(d, d), Z = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) F(j, k) = std::pow(w, j * k) / std::sqrt(static_cast<double>(d));
    X((j + 1) % d, j) = 1.0;
    Z(j, j) = std::pow(w, j);
  }
  if (d == 2)
    S.diagonal() << 1.0, cplx(0, 1);
  else
    S.diagonal() << 1.0, 1.0, w;
  const std::vector<Mat> gens = {F, S, X, Z};

  std::vector<Mat> group;
  std::set<std::vector<long long>> seen;
  std::deque<Mat> queue;
  const Mat id = Mat::Identity(d, d);
  queue.push_back(id);
  seen.insert(key_of(id));
  while (!queue.empty()) {
    Mat u = queue.front();
    queue.pop_front();
    group.push_back(u);
    for (const auto& g : gens) {
      Mat v = phase_normalized(g * u);
      if (seen.insert(key_of(v)).second) queue.push_back(std::move(v));
    }
    if (group.size() > 5000) throw ConstructionError("clifford_group: closure did not terminate");
  }
  return group;
}

std::vector<Mat> pauli_group_qubit() { return {Mat::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()}; }

GroupRep diagonal_rep(const std::vector<Mat>& us) {
  std::vector<std::pair<Mat, Mat>> els;
  for (const auto& u : us) els.emplace_back(u, u);
  return GroupRep(std::move(els));
}

GroupRep conjugate_rep(const std::vector<Mat>& us) {
  std::vector<std::pair<Mat, Mat>> els;
  for (const auto& u : us) els.emplace_back(u, u.conjugate());
  return GroupRep(std::move(els));
}

}  // namespace qb

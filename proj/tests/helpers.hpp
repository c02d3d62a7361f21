#pragma once

#include <doctest.h>

#include <cmath>

#include "qbench/tensor.hpp"

namespace qbt {

inline double fro(const qb::Mat& a, const qb::Mat& b) { return (a - b).norm(); }

inline qb::Mat phi_plus_proj(int d) {
  qb::Vec v = qb::Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v * v.adjoint();
}

inline qb::Mat swap_op(int d) {
  qb::Mat s = qb::Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

inline qb::Mat diag(std::initializer_list<double> v) {
  qb::Mat m = qb::Mat::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

}  // namespace qbt

#pragma once

#include <complex>
#include <vector>

namespace qb {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Weight exp(-x^2) on the real line.
Rule1D gauss_hermite(int n);
// Weight exp(-u) on [0, inf).
Rule1D gauss_laguerre(int n);

struct ComplexNode {
  std::complex<double> z;
  double w;
};

// Nodes for  int d^2z/pi  s e^{-s|z|^2} f(z)  as a tensor Gauss-Hermite rule in (Re z, Im z).
// Nodes whose weight is below prune * (largest weight) are dropped.
std::vector<ComplexNode> gaussian_plane_rule(int n_per_axis, double s, double prune = 1e-18);

// Polar rule for  int d^2z/pi  s e^{-s|z|^2} f(z): Gauss-Laguerre in s|z|^2, n_phi equispaced angles.
// Exact for f a polynomial in z, conj(z) of radial degree < 2 n_r and angular frequency < n_phi.
std::vector<ComplexNode> gaussian_polar_rule(int n_r, int n_phi, double s);

}  // namespace qb

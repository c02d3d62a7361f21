#include "qbench/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "qbench/errors.hpp"

namespace qb {

namespace {

Rule1D fixed_rule(const gsl_integration_fixed_type* type, int n) {
  if (n <= 0) throw ArgumentError("quadrature order must be positive");
  std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
      gsl_integration_fixed_alloc(type, static_cast<size_t>(n), 0.0, 1.0, 0.0, 0.0),
      &gsl_integration_fixed_free);
  if (!ws) throw ArgumentError("gsl could not build the quadrature rule");
  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  return {std::vector<double>(x, x + n), std::vector<double>(w, w + n)};
}

}  // namespace

Rule1D gauss_hermite(int n) { return fixed_rule(gsl_integration_fixed_hermite, n); }

Rule1D gauss_laguerre(int n) { return fixed_rule(gsl_integration_fixed_laguerre, n); }

std::vector<ComplexNode> gaussian_plane_rule(int n_per_axis, double s, double prune) {
  if (!(s > 0)) throw ArgumentError("gaussian_plane_rule: scale must be positive");
  const auto r = gauss_hermite(n_per_axis);
  const double wmax = *std::max_element(r.weights.begin(), r.weights.end());
  const double inv = 1.0 / std::sqrt(s);
  std::vector<ComplexNode> out;
  out.reserve(r.nodes.size() * r.nodes.size());
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j) {
      const double w = r.weights[i] * r.weights[j];
      if (w < prune * wmax * wmax) continue;
      out.push_back({std::complex<double>(r.nodes[i] * inv, r.nodes[j] * inv), w / std::numbers::pi});
    }
  return out;
}

std::vector<ComplexNode> gaussian_polar_rule(int n_r, int n_phi, double s) {
  if (!(s > 0)) throw ArgumentError("gaussian_polar_rule: scale must be positive");
  if (n_phi <= 0) throw ArgumentError("gaussian_polar_rule: need at least one angle");
  const auto r = gauss_laguerre(n_r);
  std::vector<ComplexNode> out;
  out.reserve(static_cast<size_t>(n_r) * n_phi);
  for (int i = 0; i < n_r; ++i) {
    const double rad = std::sqrt(r.nodes[i] / s);
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / n_phi;
      out.push_back({std::polar(rad, phi), r.weights[i] / n_phi});
    }
  }
  return out;
}

}  // namespace qb

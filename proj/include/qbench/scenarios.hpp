#pragma once

#include <complex>
#include <vector>

#include "qbench/benchmark.hpp"
#include "qbench/test_model.hpp"

namespace qb {

// Uniform pure-state transmission in dimension d: P+/Tr P+, P+ the symmetric projector.
Operator teleport_omega(int d);
DetTest teleport_det_test(int d);

// CHSH observable sqrt2 (X~ X~ + Z~ Z~) with X~ = (Z+X)/sqrt2, Z~ = (Z-X)/sqrt2; Omega = O/2.
Operator chsh_observable();
Operator chsh_omega();

// States (|0> + e^{2 pi i k/N}|1>)/sqrt2, k = 0..N-1, uniform weights; targets equal inputs.
Ensemble equator_ensemble(int n);
Operator equator_omega();  // closed form, independent of N >= 3

// Fidelity ensemble of coherent states with given amplitudes at a Fock cutoff.
Ensemble coherent_ensemble(const std::vector<std::complex<double>>& alphas, int n_max, double leak_tol = 1e-8);

}  // namespace qb

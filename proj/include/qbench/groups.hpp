#pragma once

#include <vector>

#include "qbench/benchmark.hpp"

namespace qb {

// Single-qudit Clifford group modulo phases (24 elements for d=2, 216 for d=3); a unitary 2-design.
std::vector<Mat> clifford_group(int d);
std::vector<Mat> pauli_group_qubit();  // {I, X, Y, Z}

// Pairs (U, U): target transforms like the input.
GroupRep diagonal_rep(const std::vector<Mat>& us);
// Pairs (U, conj(U)): target transforms like the complex-conjugated input.
GroupRep conjugate_rep(const std::vector<Mat>& us);

}  // namespace qb

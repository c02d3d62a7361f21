#pragma once

#include <random>

#include "qbench/test_model.hpp"

namespace qb {

using Rng = std::mt19937_64;

Mat random_ginibre(int rows, int cols, Rng& rng);
Mat random_hermitian(int d, Rng& rng);
Mat random_unitary(int d, Rng& rng);
Vec random_unit_vector(int d, Rng& rng);
// Density matrix of the given rank (full rank when rank <= 0).
Operator random_density(const Dims& dims, Rng& rng, int rank = 0);

// Isometric Kraus stack; trace-nonincreasing variants also get a random filter 0 <= Q <= I on the input.
Channel random_channel(int d_in, int d_out, int n_kraus, Rng& rng, bool trace_preserving = true);

}  // namespace qb

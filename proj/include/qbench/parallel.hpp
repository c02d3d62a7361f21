#pragma once

namespace qb {

enum class Exec { serial, parallel };

// Reads QBENCH_THREADS and caps the OpenMP team size. Returns the resulting cap.
int configure_threads_from_env();
int max_threads();

}  // namespace qb

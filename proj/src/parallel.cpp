#include "qbench/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace qb {

int configure_threads_from_env() {
  if (const char* s = std::getenv("QBENCH_THREADS")) {
    try {
      const int n = std::stoi(s);
      if (n > 0) omp_set_num_threads(n);
    } catch (...) {
      // unparsable value: keep the OpenMP default
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace qb

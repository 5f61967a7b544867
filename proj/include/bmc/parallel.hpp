#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmc::par {

// Runtime switch so the OpenMP kernels can be compared against their serial
// reference paths from tests and the benchmark.
bool enabled();
void set_enabled(bool on);

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace bmc::par

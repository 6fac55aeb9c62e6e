#pragma once

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline double omp_get_wtime() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
#endif

// Every parallel loop in this library writes results into a preallocated
// slot indexed by the loop counter and reduces serially afterwards, so the
// parallel and serial paths produce bit-identical output.  `parallel=false`
// runs the same loop body without the pragma.

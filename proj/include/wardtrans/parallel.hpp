#ifndef WARDTRANS_PARALLEL_HPP
#define WARDTRANS_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wardtrans {

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs body(i) for i in [0, n). With threads <= 1 (or without OpenMP) this
/// is the serial reference loop. Parallel and serial execution produce
/// identical results as long as each index writes only to its own slot and
/// draws randomness from its own stream.
template <typename Body>
void parallel_for(long n, int threads, Body&& body) {
#ifdef _OPENMP
  if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
#endif
  (void)threads;
  for (long i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace wardtrans

#endif

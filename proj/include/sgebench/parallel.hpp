#pragma once

#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgebench {

inline bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

// Instance-batch loop. concurrency <= 1 runs the serial reference path;
// otherwise the OpenMP kernel with dynamic scheduling. Bodies must be
// independent and must not throw across the region (the runner captures
// per-instance errors itself).
inline void parallel_for(int count, int concurrency, const std::function<void(int)>& body) {
#ifdef _OPENMP
  if (concurrency > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(concurrency)
    for (int i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
#endif
  (void)concurrency;
  for (int i = 0; i < count; ++i) {
    body(i);
  }
}

}  // namespace sgebench

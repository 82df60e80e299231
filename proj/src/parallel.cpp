#include "gauss_extremes/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace gex {

namespace {

std::atomic<int> g_override{0};

int default_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int worker_count() {
  if (const int w = g_override.load(); w > 0) return w;
  if (const char* env = std::getenv("GAUSS_EXTREMES_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) return cap < default_workers() ? cap : default_workers();
    } catch (...) {
      // unparsable value: fall through to the default
    }
  }
  return default_workers();
}

void set_worker_count(int workers) { g_override.store(workers > 0 ? workers : 0); }

}  // namespace gex

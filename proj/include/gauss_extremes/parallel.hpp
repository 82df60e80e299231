#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gex {

// Worker cap: GAUSS_EXTREMES_THREADS when set to a positive integer,
// otherwise the OpenMP default. set_worker_count(0) restores that default.
int worker_count();
void set_worker_count(int workers);

inline constexpr std::uint64_t kReductionBlock = 1024;

// Runs body(rep, acc, state) for rep in [0, n). Replications are grouped
// in fixed blocks of `block`; each block has its own accumulator and the
// block accumulators are merged in index order, so the result does not
// depend on the number of workers or on scheduling. `state` is per-worker
// scratch built by make_state().
template <class Acc, class MakeState, class Body, class Merge>
Acc block_reduce(std::uint64_t n, const Acc& zero, MakeState&& make_state, Body&& body,
                 Merge&& merge, std::uint64_t block = kReductionBlock) {
  const std::uint64_t nblocks = (n + block - 1) / block;
  std::vector<Acc> partial(nblocks, zero);
  std::exception_ptr error;
  std::mutex error_mutex;

#pragma omp parallel num_threads(worker_count())
  {
    try {
      auto state = make_state();
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * block;
        const std::uint64_t end = begin + block < n ? begin + block : n;
        try {
          for (std::uint64_t rep = begin; rep < end; ++rep) body(rep, partial[b], state);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  Acc total = zero;
  for (const Acc& p : partial) merge(total, p);
  return total;
}

// Runs body(rep, state) for rep in [0, n); body must only write to
// replication-owned output.
template <class MakeState, class Body>
void parallel_for(std::uint64_t n, MakeState&& make_state, Body&& body) {
  struct Nothing {};
  block_reduce(
      n, Nothing{}, make_state,
      [&](std::uint64_t rep, Nothing&, auto& state) { body(rep, state); },
      [](Nothing&, const Nothing&) {});
}

}  // namespace gex

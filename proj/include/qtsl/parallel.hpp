#pragma once

// OpenMP fan-out with a fixed chunking, so reductions merge in the same order
// whatever the worker count. Exec::Serial is the reference path.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

#ifdef QTSL_OPENMP
#include <omp.h>
#endif

namespace qtsl {

enum class Exec { Serial, Parallel };

/// 0 means the OpenMP default.
void set_worker_count(int workers);
int worker_count();

inline constexpr std::size_t kReduceChunks = 256;

/// Splits [0, n) into at most kReduceChunks contiguous chunks, folds each
/// chunk from `init` with body(acc, i), then merges chunks in index order.
template <class T, class Body, class Merge>
T chunked_reduce(std::size_t n, Exec exec, const T& init, Body body, Merge merge) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min(n, kReduceChunks));
  std::vector<T> partial(chunks, init);
  std::vector<std::exception_ptr> errors(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    try {
      for (std::size_t i = lo; i < hi; ++i) body(partial[c], i);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
#ifdef QTSL_OPENMP
  if (exec == Exec::Parallel) {
    const int threads = worker_count() > 0 ? worker_count() : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) run_chunk(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  }
#else
  (void)exec;
  for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
#endif
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  T acc = init;
  for (auto& p : partial) merge(acc, p);
  return acc;
}

/// Independent per-index work; results land in slot i.
template <class T, class Body>
std::vector<T> parallel_map(std::size_t n, Exec exec, Body body) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      out[i] = body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
#ifdef QTSL_OPENMP
  if (exec == Exec::Parallel) {
    const int threads = worker_count() > 0 ? worker_count() : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) run(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) run(i);
  }
#else
  (void)exec;
  for (std::size_t i = 0; i < n; ++i) run(i);
#endif
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace qtsl

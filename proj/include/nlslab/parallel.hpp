#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlslab::parallel {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Work is cut into chunks whose boundaries depend only on the problem size,
// never on the thread count; per-chunk partial results are then combined
// serially in chunk order. Floating-point reductions are therefore
// bit-identical for any number of threads.
inline constexpr std::size_t kChunk = 64;

inline std::size_t chunk_count(std::size_t n, std::size_t chunk = kChunk) {
  return (n + chunk - 1) / chunk;
}

/// Runs body(chunk_index, begin, end) for each chunk of [0, n).
/// Exceptions thrown by the body are rethrown on the calling thread (the
/// one from the lowest-numbered failing chunk).
template <class Body>
void for_each_chunk(std::size_t n, Body&& body, std::size_t chunk = kChunk) {
  const auto chunks = static_cast<std::int64_t>(chunk_count(n, chunk));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    const std::size_t end = begin + chunk < n ? begin + chunk : n;
    try {
      body(static_cast<std::size_t>(c), begin, end);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Ordered map-reduce: partial[c] = map(chunk c), then fold in chunk order.
template <class Partial, class Map, class Fold>
Partial chunked_reduce(std::size_t n, Partial init, Map&& map, Fold&& fold,
                       std::size_t chunk = kChunk) {
  std::vector<Partial> partials(chunk_count(n, chunk), init);
  for_each_chunk(
      n, [&](std::size_t c, std::size_t b, std::size_t e) { partials[c] = map(b, e); }, chunk);
  Partial acc = init;
  for (auto& p : partials) fold(acc, p);
  return acc;
}

}  // namespace nlslab::parallel

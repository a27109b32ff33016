#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dmp::parallel {

/// Caps worker threads used by node loops. 0 restores the default, which is
/// DMP_THREADS when set, else the hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Splits [0, size) into a number of chunks that depends on `size` only and
/// runs `body(chunk, begin, end)` for each. Callers reduce per-chunk results
/// in chunk order, so sums do not depend on the thread count.
std::size_t chunk_count(std::size_t size);
void for_chunks(std::size_t size,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Runs body(i) for every i in [0, count), one task per index. Each task
/// must write only its own outputs.
void for_each(std::size_t count, const std::function<void(std::size_t)>& body);

/// Deterministic parallel sum of `term(i)` over [0, size).
template <class Term>
double sum(std::size_t size, Term&& term)
{
  std::vector<double> partial(chunk_count(size), 0.0);
  for_chunks(size, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i)
      acc += term(i);
    partial[chunk] = acc;
  });
  double total = 0.0;
  for (double p : partial)
    total += p;
  return total;
}

} // namespace dmp::parallel

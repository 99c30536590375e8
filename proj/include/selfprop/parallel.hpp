#pragma once

// Thread control and reductions whose result does not depend on the number
// of workers. Elementwise loops are parallelised with OpenMP when available;
// every reduction is evaluated over a fixed block partition followed by a
// fixed pairwise tree, so sums are bit-identical for any thread count.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace selfprop {

inline void set_thread_count(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Number of terms folded into one partial sum of the reduction tree.
inline constexpr std::size_t kReductionBlock = 2048;

namespace detail {

inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace detail

/// Sum of term(i) for i in [0, n) with a fixed evaluation order.
template <class Term>
double deterministic_sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    double buf[kReductionBlock];
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    for (std::size_t i = lo; i < hi; ++i) buf[i - lo] = term(i);
    partial[static_cast<std::size_t>(b)] = detail::pairwise_sum(buf, hi - lo);
  }
  return detail::pairwise_sum(partial.data(), partial.size());
}

inline double deterministic_sum(std::span<const double> values) {
  return deterministic_sum(values.size(), [values](std::size_t i) { return values[i]; });
}

}  // namespace selfprop

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crosslab {

/// Worker-count resolution order: explicit request > CROSSING_LAB_WORKERS > OpenMP default.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CROSSING_LAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

/// Running (sum, sum of squares, count) of a sample stream plus a tally of
/// flagged samples (degenerate predicate hits and the like).
struct MeanAccum {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
  std::uint64_t flagged = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const MeanAccum& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
    flagged += o.flagged;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  /// Standard error of the mean (sample stddev / sqrt(n)).
  double std_error() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

inline constexpr std::uint64_t kChunkSize = 1u << 16;

/// Deterministic chunked mean: samples are split into fixed-size chunks,
/// each chunk accumulates serially, and partials are merged in chunk order.
/// The result is bit-identical for any worker count because the chunk
/// layout does not depend on it. sample(i, accum) must derive all of its
/// randomness from the sample index i.
template <class Fn>
MeanAccum chunked_mean(std::uint64_t n_samples, int workers, Fn&& sample) {
  const std::uint64_t n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<MeanAccum> partials(static_cast<std::size_t>(n_chunks));

  const int nthreads = resolve_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#endif
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
    MeanAccum acc;
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunkSize;
    const std::uint64_t hi = std::min(n_samples, lo + kChunkSize);
    for (std::uint64_t i = lo; i < hi; ++i) acc.add(sample(i, acc));
    partials[static_cast<std::size_t>(c)] = acc;
  }
  (void)nthreads;

  MeanAccum total;
  for (const MeanAccum& p : partials) total.merge(p);
  return total;
}

/// Plain serial loop, kept as an independent reference for the chunked kernel.
/// Accumulation order differs from chunked_mean, so agreement is up to
/// floating-point roundoff, not bitwise.
template <class Fn>
MeanAccum plain_mean(std::uint64_t n_samples, Fn&& sample) {
  MeanAccum acc;
  for (std::uint64_t i = 0; i < n_samples; ++i) acc.add(sample(i, acc));
  return acc;
}

/// Deterministic chunked integer reduction over an index range [0, n).
/// body(i) -> contribution added into a per-chunk 64-bit tally.
template <class Fn>
std::uint64_t chunked_count(std::uint64_t n, int workers, Fn&& body) {
  const std::uint64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<std::uint64_t> partials(static_cast<std::size_t>(n_chunks), 0);

  const int nthreads = resolve_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#endif
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
    std::uint64_t tally = 0;
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunkSize;
    const std::uint64_t hi = std::min(n, lo + kChunkSize);
    for (std::uint64_t i = lo; i < hi; ++i) tally += body(i);
    partials[static_cast<std::size_t>(c)] = tally;
  }
  (void)nthreads;

  std::uint64_t total = 0;
  for (std::uint64_t p : partials) total += p;
  return total;
}

}  // namespace crosslab

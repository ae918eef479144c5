// Benchmark: serial reference kernels vs the OpenMP-parallel ones.
// Usage: crossing_bench [n] [t] [samples]

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

#include "crosslab/drawing.hpp"
#include "crosslab/functionals.hpp"
#include "crosslab/parallel.hpp"

using namespace crosslab;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 400;
  const double t = argc > 2 ? std::stod(argv[2]) : 1.0471975511965976;
  const std::uint64_t samples = argc > 3 ? std::stoull(argv[3]) : 2000000;
  const int max_workers = resolve_workers(0);

  std::printf("crossing_bench: n=%zu t=%.4f samples=%llu max workers=%d\n", n, t,
              static_cast<unsigned long long>(samples), max_workers);

  const Drawing d = generate_sphere_threshold(n, t, SphereSampler::Fibonacci, 1);
  std::printf("drawing: m=%zu edges, %zu vertex pairs\n", d.m(), d.n() * (d.n() - 1) / 2);

  std::uint64_t serial_count = 0, par_count = 0, grid_count = 0;
  const double t_serial =
      time_ms([&] { serial_count = count_crossings_brute_serial(d).crossings; });
  const double t_brute = time_ms([&] { par_count = count_crossings_brute(d, 0).crossings; });
  const double t_grid = time_ms([&] { grid_count = count_crossings_grid(d, 0).crossings; });

  std::printf("%-26s %12.1f ms   cr=%llu\n", "brute (serial reference)", t_serial,
              static_cast<unsigned long long>(serial_count));
  std::printf("%-26s %12.1f ms   cr=%llu   speedup %.2fx\n", "brute (parallel blocks)", t_brute,
              static_cast<unsigned long long>(par_count), t_serial / t_brute);
  std::printf("%-26s %12.1f ms   cr=%llu   speedup %.2fx\n", "grid (parallel, pruned)", t_grid,
              static_cast<unsigned long long>(grid_count), t_serial / t_grid);
  if (serial_count != par_count || serial_count != grid_count) {
    std::printf("ENGINE MISMATCH\n");
    return 1;
  }

  const EdgeDensity w = EdgeDensity::threshold_sphere(t);
  auto mc_sample = [&](std::uint64_t i, MeanAccum&) {
    SubStream st(7, i);
    const UnitVec3 x1 = sample_uniform_sphere(st);
    const UnitVec3 x2 = sample_uniform_sphere(st);
    const UnitVec3 x3 = sample_uniform_sphere(st);
    const UnitVec3 x4 = sample_uniform_sphere(st);
    const double w12 = w.evaluate(x1, x2);
    const double w34 = w.evaluate(x3, x4);
    if (w12 == 0.0 || w34 == 0.0) return 0.0;
    return arc_cross(GeodesicArc(x1, x2), GeodesicArc(x3, x4)).is_cross() ? w12 * w34 : 0.0;
  };

  MeanAccum plain, chunked;
  const double t_plain = time_ms([&] { plain = plain_mean(samples, mc_sample); });
  const double t_chunk = time_ms([&] { chunked = chunked_mean(samples, 0, mc_sample); });
  std::printf("%-26s %12.1f ms   Cr=%.6g\n", "mc (plain serial loop)", t_plain, plain.mean());
  std::printf("%-26s %12.1f ms   Cr=%.6g   speedup %.2fx\n", "mc (chunked parallel)", t_chunk,
              chunked.mean(), t_plain / t_chunk);
  return 0;
}

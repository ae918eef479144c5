#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crosslab/planar.hpp"
#include "crosslab/sphere.hpp"

namespace crosslab {

enum class Ambient { Sphere, Planar };

struct DrawingMeta {
  std::string generator;
  std::uint64_t seed = 0;
  double threshold = 0.0;  // t (radians) on the sphere, r (length) in the plane
};

/// Finite vertex embedding plus an edge index list. Edges are stored with
/// i < j, sorted and deduplicated.
struct Drawing {
  Ambient ambient = Ambient::Sphere;
  std::optional<ConvexDomain> domain;  // planar only
  std::vector<UnitVec3> sphere_vertices;
  std::vector<Point2> planar_vertices;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  DrawingMeta meta;

  std::size_t n() const {
    return ambient == Ambient::Sphere ? sphere_vertices.size() : planar_vertices.size();
  }
  std::size_t m() const { return edges.size(); }

  GeodesicArc arc(std::size_t e) const {
    return GeodesicArc(sphere_vertices[edges[e].first], sphere_vertices[edges[e].second]);
  }
  Segment2 segment(std::size_t e) const {
    return Segment2(planar_vertices[edges[e].first], planar_vertices[edges[e].second]);
  }

  /// Checks all structural invariants; throws on violation.
  void validate() const;
};

enum class SphereSampler { Random, Fibonacci };
enum class PlanarSampler { Random, PerturbedGrid };

/// Threshold drawing on the sphere: edges are exactly the pairs at spherical
/// distance <= t, found with a spatial grid (full scan for large t).
Drawing generate_sphere_threshold(std::size_t n, double t, SphereSampler sampler,
                                  std::uint64_t seed);

/// Planar threshold drawing in a convex domain: pairs at Euclidean distance
/// <= r. PerturbedGrid follows the jittered sqrt(n) x sqrt(n) construction.
Drawing generate_planar_threshold(std::size_t n, double r, const ConvexDomain& domain,
                                  std::uint64_t seed, PlanarSampler sampler = PlanarSampler::Random);

enum class CountingEngine { Brute, Grid };

struct CrossingReport {
  std::uint64_t crossings = 0;
  std::uint64_t pairs_tested = 0;
  std::uint64_t adjacent_skipped = 0;
  std::uint64_t degenerate_pairs = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> degenerate_examples;  // capped
  CountingEngine engine = CountingEngine::Brute;
  double wall_time_ms = 0.0;

  /// A count is only usable when no pair hit the degeneracy tolerances.
  bool valid() const { return degenerate_pairs == 0; }
};

/// Exact count over all unordered independent edge pairs, parallelized over
/// contiguous blocks of the linearized upper-triangular pair index.
CrossingReport count_crossings_brute(const Drawing& d, int workers = 0);

/// Plain single-threaded double loop; reference for the parallel engines.
CrossingReport count_crossings_brute_serial(const Drawing& d);

/// Same count as brute, pruned: edges get bounding caps (sphere) or boxes
/// (plane), and only pairs with overlapping bounds reach the predicate.
CrossingReport count_crossings_grid(const Drawing& d, int workers = 0);

struct DensityStats {
  std::size_t n = 0, m = 0;
  double ordered_density = 0.0;  // 2m/n^2
  double half_density = 0.0;     // m/n^2
};

DensityStats density_stats(const Drawing& d);

/// JSON round-trip. `strict` rejects unsorted or duplicate edges instead of
/// normalizing them.
void save_drawing(const Drawing& d, const std::string& path);
Drawing load_drawing(const std::string& path, bool strict = true);
Drawing drawing_from_json_text(const std::string& text, bool strict = true);
std::string drawing_to_json_text(const Drawing& d);

/// Symmetric vertex jitter of angular (or Euclidean) size eps; measure-zero
/// degeneracies are handled by re-running with this, never silently.
Drawing jittered(const Drawing& d, double eps, std::uint64_t seed);

Drawing apply_rotation(const Drawing& d, const Rotation& r);
Drawing apply_affine(const Drawing& d, const AffineMap& t);

}  // namespace crosslab

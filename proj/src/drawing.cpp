#include "crosslab/drawing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "crosslab/parallel.hpp"

namespace crosslab {

using json = nlohmann::json;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::uint64_t bits_of(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

}  // namespace

void Drawing::validate() const {
  const std::size_t nv = n();
  if (nv == 0) throw std::invalid_argument("Drawing: no vertices");
  if (ambient == Ambient::Planar && !domain)
    throw std::invalid_argument("Drawing: planar drawing needs a domain");

  // Pairwise-distinct positions, checked as exact bit patterns.
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(nv * 2);
  for (std::size_t i = 0; i < nv; ++i) {
    std::uint64_t h;
    if (ambient == Ambient::Sphere) {
      const Vec3& v = sphere_vertices[i].vec();
      h = mix64(bits_of(v.x) ^ mix64(bits_of(v.y) ^ mix64(bits_of(v.z))));
    } else {
      h = mix64(bits_of(planar_vertices[i].x) ^ mix64(bits_of(planar_vertices[i].y)));
    }
    if (!seen.insert(h).second) {
      // Hash collision or true duplicate; confirm by scan.
      for (std::size_t j = 0; j < i; ++j) {
        const bool dup = ambient == Ambient::Sphere
                             ? sphere_vertices[j].same_point(sphere_vertices[i])
                             : planar_vertices[j] == planar_vertices[i];
        if (dup) throw std::invalid_argument("Drawing: duplicate vertex positions");
      }
    }
  }

  std::pair<std::uint32_t, std::uint32_t> prev{0, 0};
  bool first = true;
  for (const auto& e : edges) {
    if (e.first >= e.second) throw std::invalid_argument("Drawing: edge must have i < j");
    if (e.second >= nv) throw std::invalid_argument("Drawing: edge index out of range");
    if (!first && !(prev < e)) throw std::invalid_argument("Drawing: edges not sorted/deduplicated");
    prev = e;
    first = false;
    if (ambient == Ambient::Sphere) {
      const Vec3 s = sphere_vertices[e.first].vec() + sphere_vertices[e.second].vec();
      if (s.norm() <= 1e-10) throw std::invalid_argument("Drawing: edge joins antipodal points");
    }
  }
}

namespace {

// 3-D cell key for points in [-1,1]^3 (sphere) or a bounding box (plane).
std::uint64_t cell_key(long ix, long iy, long iz) {
  const std::uint64_t a = static_cast<std::uint64_t>(ix + (1L << 20));
  const std::uint64_t b = static_cast<std::uint64_t>(iy + (1L << 20));
  const std::uint64_t c = static_cast<std::uint64_t>(iz + (1L << 20));
  return (a << 42) | (b << 21) | c;
}

using Edge = std::pair<std::uint32_t, std::uint32_t>;

std::vector<Edge> sphere_threshold_edges(const std::vector<UnitVec3>& pts, double t) {
  const std::size_t n = pts.size();
  std::vector<Edge> edges;
  const double cos_t = std::cos(t);
  const double chord = 2.0 * std::sin(0.5 * std::min(t, 3.14159265358979323846));

  auto within = [&](std::size_t i, std::size_t j) {
    // d(a,b) <= t  <=>  a.b >= cos t  (both in [0, pi])
    return pts[i].vec().dot(pts[j].vec()) >= cos_t;
  };

  if (chord >= 0.9) {  // grid cells would span the whole cube; scan instead
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (within(i, j)) edges.emplace_back(i, j);
    return edges;
  }

  const double h = chord;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
  cells.reserve(n);
  auto key_of = [&](const Vec3& v) {
    return cell_key(static_cast<long>(std::floor(v.x / h)), static_cast<long>(std::floor(v.y / h)),
                    static_cast<long>(std::floor(v.z / h)));
  };
  for (std::size_t i = 0; i < n; ++i) cells[key_of(pts[i].vec())].push_back(i);

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& v = pts[i].vec();
    const long cx = static_cast<long>(std::floor(v.x / h));
    const long cy = static_cast<long>(std::floor(v.y / h));
    const long cz = static_cast<long>(std::floor(v.z / h));
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          const auto it = cells.find(cell_key(cx + dx, cy + dy, cz + dz));
          if (it == cells.end()) continue;
          for (std::uint32_t j : it->second)
            if (j > i && within(i, j)) edges.emplace_back(i, j);
        }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Edge> planar_threshold_edges(const std::vector<Point2>& pts, double r) {
  const std::size_t n = pts.size();
  std::vector<Edge> edges;
  if (!(r > 0.0)) return edges;
  const double r2 = r * r;

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
  cells.reserve(n);
  auto key_of = [&](const Point2& p) {
    return cell_key(static_cast<long>(std::floor(p.x / r)), static_cast<long>(std::floor(p.y / r)), 0);
  };
  for (std::size_t i = 0; i < n; ++i) cells[key_of(pts[i])].push_back(i);

  for (std::size_t i = 0; i < n; ++i) {
    const long cx = static_cast<long>(std::floor(pts[i].x / r));
    const long cy = static_cast<long>(std::floor(pts[i].y / r));
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        const auto it = cells.find(cell_key(cx + dx, cy + dy, 0));
        if (it == cells.end()) continue;
        for (std::uint32_t j : it->second) {
          if (j <= i) continue;
          const Point2 d = pts[j] - pts[i];
          if (d.x * d.x + d.y * d.y <= r2) edges.emplace_back(i, j);
        }
      }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

Drawing generate_sphere_threshold(std::size_t n, double t, SphereSampler sampler,
                                  std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_sphere_threshold: n must be >= 2");
  if (!(t > 0.0) || !(t <= 3.14159265358979323846))
    throw std::invalid_argument("generate_sphere_threshold: t must lie in (0, pi]");

  Drawing d;
  d.ambient = Ambient::Sphere;
  d.meta.seed = seed;
  d.meta.threshold = t;
  if (sampler == SphereSampler::Fibonacci) {
    d.meta.generator = "sphere-threshold-fibonacci";
    d.sphere_vertices = fibonacci_sphere(n);
  } else {
    d.meta.generator = "sphere-threshold-random";
    d.sphere_vertices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      SubStream st(seed, i);
      d.sphere_vertices.push_back(sample_uniform_sphere(st));
    }
  }
  d.edges = sphere_threshold_edges(d.sphere_vertices, t);
  return d;
}

Drawing generate_planar_threshold(std::size_t n, double r, const ConvexDomain& domain,
                                  std::uint64_t seed, PlanarSampler sampler) {
  if (n < 2) throw std::invalid_argument("generate_planar_threshold: n must be >= 2");
  if (r < 0.0) throw std::invalid_argument("generate_planar_threshold: r must be >= 0");

  Drawing d;
  d.ambient = Ambient::Planar;
  d.domain = domain;
  d.meta.seed = seed;
  d.meta.threshold = r;

  if (sampler == PlanarSampler::Random) {
    d.meta.generator = "planar-threshold-random";
    d.planar_vertices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      SubStream st(seed, i);
      d.planar_vertices.push_back(domain.sample(st));
    }
  } else {
    d.meta.generator = "planar-threshold-grid";
    // Bounding box of the domain.
    double x0, x1, y0, y1;
    if (domain.is_disk()) {
      const Disk& dk = domain.as_disk();
      x0 = dk.center.x - dk.radius;
      x1 = dk.center.x + dk.radius;
      y0 = dk.center.y - dk.radius;
      y1 = dk.center.y + dk.radius;
    } else {
      x0 = y0 = std::numeric_limits<double>::infinity();
      x1 = y1 = -std::numeric_limits<double>::infinity();
      for (const Point2& p : domain.as_polygon().vertices) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
      }
    }
    // Smallest k x k grid with at least n cell centers inside the domain.
    std::size_t k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::vector<Point2> centers;
    for (;; ++k) {
      centers.clear();
      const double hx = (x1 - x0) / static_cast<double>(k);
      const double hy = (y1 - y0) / static_cast<double>(k);
      for (std::size_t iy = 0; iy < k && centers.size() < n; ++iy)
        for (std::size_t ix = 0; ix < k && centers.size() < n; ++ix) {
          const Point2 c{x0 + (ix + 0.5) * hx, y0 + (iy + 0.5) * hy};
          if (domain.contains(c, 0.0)) centers.push_back(c);
        }
      if (centers.size() >= n) break;
      if (k > 16 * n) throw std::runtime_error("generate_planar_threshold: grid fill failed");
    }
    const double jig = r / 10.0;
    d.planar_vertices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      SubStream st(seed, i);
      const Point2 off{jig * (2.0 * st.uniform() - 1.0), jig * (2.0 * st.uniform() - 1.0)};
      d.planar_vertices.push_back(centers[i] + off);
    }
  }
  d.edges = planar_threshold_edges(d.planar_vertices, r);
  return d;
}

// ---------------------------------------------------------------------------
// Crossing counters
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kDegenerateExampleCap = 16;

struct PairTally {
  std::uint64_t crossings = 0;
  std::uint64_t tested = 0;
  std::uint64_t adjacent = 0;
  std::uint64_t degenerate = 0;
  std::vector<Edge> examples;

  void merge(const PairTally& o) {
    crossings += o.crossings;
    tested += o.tested;
    adjacent += o.adjacent;
    degenerate += o.degenerate;
    for (const Edge& e : o.examples)
      if (examples.size() < kDegenerateExampleCap) examples.push_back(e);
  }
};

// Precomputed primitives, one per edge.
struct SpherePrimitives {
  std::vector<GeodesicArc> arcs;
  explicit SpherePrimitives(const Drawing& d) {
    arcs.reserve(d.m());
    for (std::size_t e = 0; e < d.m(); ++e) arcs.push_back(d.arc(e));
  }
};

struct PlanarPrimitives {
  std::vector<Segment2> segs;
  explicit PlanarPrimitives(const Drawing& d) {
    segs.reserve(d.m());
    for (std::size_t e = 0; e < d.m(); ++e) segs.push_back(d.segment(e));
  }
};

template <class TestPair>
void tally_pair(const Drawing& d, std::size_t i, std::size_t j, const TestPair& test,
                PairTally& t) {
  const Edge& ei = d.edges[i];
  const Edge& ej = d.edges[j];
  if (ei.first == ej.first || ei.first == ej.second || ei.second == ej.first ||
      ei.second == ej.second) {
    ++t.adjacent;
    return;
  }
  ++t.tested;
  const CrossResult r = test(i, j);
  if (r.is_cross()) {
    ++t.crossings;
  } else if (r.is_degenerate()) {
    ++t.degenerate;
    if (t.examples.size() < kDegenerateExampleCap)
      t.examples.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
}

// Row offset of the linearized upper-triangular pair index.
std::uint64_t row_offset(std::uint64_t i, std::uint64_t m) { return i * (2 * m - i - 1) / 2; }

// Inverts k -> (i, j), i < j < m.
void pair_from_index(std::uint64_t k, std::uint64_t m, std::uint64_t& i, std::uint64_t& j) {
  const double md = static_cast<double>(m) - 0.5;
  double guess = md - std::sqrt(std::max(0.0, md * md - 2.0 * static_cast<double>(k)));
  i = static_cast<std::uint64_t>(std::max(0.0, guess));
  if (i >= m - 1) i = m - 2;
  while (i + 1 < m && row_offset(i + 1, m) <= k) ++i;
  while (i > 0 && row_offset(i, m) > k) --i;
  j = i + 1 + (k - row_offset(i, m));
}

template <class TestPair>
CrossingReport count_pairs_blocked(const Drawing& d, int workers, const TestPair& test,
                                   CountingEngine tag) {
  const double t0 = now_ms();
  const std::uint64_t m = d.m();
  CrossingReport rep;
  rep.engine = tag;
  if (m < 2) {
    rep.wall_time_ms = now_ms() - t0;
    return rep;
  }
  const std::uint64_t pairs = m * (m - 1) / 2;
  // Fixed-size blocks keep the partial list deterministic; the size is a
  // function of the pair count alone, capped so huge inputs do not blow up
  // the partials vector.
  const std::uint64_t block = std::max<std::uint64_t>(1u << 18, pairs / (1u << 16));
  const std::uint64_t n_blocks = (pairs + block - 1) / block;
  std::vector<PairTally> partials(static_cast<std::size_t>(n_blocks));

  const int nthreads = resolve_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(n_blocks); ++b) {
    PairTally t;
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
    const std::uint64_t hi = std::min(pairs, lo + block);
    std::uint64_t i, j;
    pair_from_index(lo, m, i, j);
    for (std::uint64_t k = lo; k < hi; ++k) {
      tally_pair(d, i, j, test, t);
      if (++j == m) {
        ++i;
        j = i + 1;
      }
    }
    partials[static_cast<std::size_t>(b)] = std::move(t);
  }
  (void)nthreads;

  PairTally total;
  for (PairTally& p : partials) total.merge(p);
  rep.crossings = total.crossings;
  rep.pairs_tested = total.tested;
  rep.adjacent_skipped = total.adjacent;
  rep.degenerate_pairs = total.degenerate;
  rep.degenerate_examples = std::move(total.examples);
  rep.wall_time_ms = now_ms() - t0;
  return rep;
}

}  // namespace

CrossingReport count_crossings_brute(const Drawing& d, int workers) {
  if (d.ambient == Ambient::Sphere) {
    SpherePrimitives prim(d);
    return count_pairs_blocked(
        d, workers, [&](std::size_t i, std::size_t j) { return arc_cross(prim.arcs[i], prim.arcs[j]); },
        CountingEngine::Brute);
  }
  PlanarPrimitives prim(d);
  return count_pairs_blocked(
      d, workers, [&](std::size_t i, std::size_t j) { return segment_cross(prim.segs[i], prim.segs[j]); },
      CountingEngine::Brute);
}

CrossingReport count_crossings_brute_serial(const Drawing& d) {
  const double t0 = now_ms();
  CrossingReport rep;
  rep.engine = CountingEngine::Brute;
  PairTally t;
  if (d.ambient == Ambient::Sphere) {
    SpherePrimitives prim(d);
    for (std::size_t i = 0; i < d.m(); ++i)
      for (std::size_t j = i + 1; j < d.m(); ++j)
        tally_pair(d, i, j, [&](std::size_t a, std::size_t b) { return arc_cross(prim.arcs[a], prim.arcs[b]); }, t);
  } else {
    PlanarPrimitives prim(d);
    for (std::size_t i = 0; i < d.m(); ++i)
      for (std::size_t j = i + 1; j < d.m(); ++j)
        tally_pair(d, i, j, [&](std::size_t a, std::size_t b) { return segment_cross(prim.segs[a], prim.segs[b]); }, t);
  }
  rep.crossings = t.crossings;
  rep.pairs_tested = t.tested;
  rep.adjacent_skipped = t.adjacent;
  rep.degenerate_pairs = t.degenerate;
  rep.degenerate_examples = std::move(t.examples);
  rep.wall_time_ms = now_ms() - t0;
  return rep;
}

namespace {

// Bounding cap of an arc: midpoint plus half the arc length. Contains the
// whole arc by the triangle inequality.
struct Cap {
  Vec3 center;
  double radius;
};

template <class Bound, class Overlaps, class TestPair>
CrossingReport count_pruned(const Drawing& d, int workers, const std::vector<Bound>& bounds,
                            double cell_size, const Overlaps& overlaps, const TestPair& test,
                            const std::vector<Vec3>& positions) {
  const double t0 = now_ms();
  const std::uint64_t m = d.m();
  CrossingReport rep;
  rep.engine = CountingEngine::Grid;
  if (m < 2) {
    rep.wall_time_ms = now_ms() - t0;
    return rep;
  }

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
  cells.reserve(m);
  auto cell_of = [&](const Vec3& p) {
    return cell_key(static_cast<long>(std::floor(p.x / cell_size)),
                    static_cast<long>(std::floor(p.y / cell_size)),
                    static_cast<long>(std::floor(p.z / cell_size)));
  };
  for (std::uint32_t e = 0; e < m; ++e) cells[cell_of(positions[e])].push_back(e);

  std::vector<PairTally> partials(static_cast<std::size_t>(m));
  const int nthreads = resolve_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(nthreads)
#endif
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(m); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    PairTally t;
    const Vec3& p = positions[i];
    const long cx = static_cast<long>(std::floor(p.x / cell_size));
    const long cy = static_cast<long>(std::floor(p.y / cell_size));
    const long cz = static_cast<long>(std::floor(p.z / cell_size));
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          const auto it = cells.find(cell_key(cx + dx, cy + dy, cz + dz));
          if (it == cells.end()) continue;
          for (std::uint32_t j : it->second) {
            if (j <= i) continue;
            if (!overlaps(bounds[i], bounds[j])) continue;
            tally_pair(d, i, j, test, t);
          }
        }
    partials[i] = std::move(t);
  }
  (void)nthreads;

  PairTally total;
  for (PairTally& p2 : partials) total.merge(p2);
  rep.crossings = total.crossings;
  rep.pairs_tested = total.tested;
  rep.adjacent_skipped = total.adjacent;
  rep.degenerate_pairs = total.degenerate;
  rep.degenerate_examples = std::move(total.examples);
  rep.wall_time_ms = now_ms() - t0;
  return rep;
}

}  // namespace

CrossingReport count_crossings_grid(const Drawing& d, int workers) {
  const std::uint64_t m = d.m();
  if (d.ambient == Ambient::Sphere) {
    SpherePrimitives prim(d);
    std::vector<Cap> caps;
    std::vector<Vec3> centers;
    caps.reserve(m);
    centers.reserve(m);
    double r_max = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      const GeodesicArc& a = prim.arcs[e];
      Cap c{a.midpoint().vec(), 0.5 * a.length()};
      r_max = std::max(r_max, c.radius);
      centers.push_back(c.center);
      caps.push_back(c);
    }
    // Two caps can only meet if their centers are within r_i + r_j <= 2 r_max
    // along the sphere, i.e. within this chord in R^3.
    const double cell = std::max(1e-3, 2.0 * std::sin(std::min(r_max, 1.5707963267948966)));
    auto overlaps = [](const Cap& a, const Cap& b) {
      const double cos_d = std::max(-1.0, std::min(1.0, a.center.dot(b.center)));
      return std::acos(cos_d) <= a.radius + b.radius + 1e-9;
    };
    return count_pruned(
        d, workers, caps, cell, overlaps,
        [&](std::size_t i, std::size_t j) { return arc_cross(prim.arcs[i], prim.arcs[j]); }, centers);
  }

  PlanarPrimitives prim(d);
  struct Box {
    double x0, x1, y0, y1;
  };
  std::vector<Box> boxes;
  std::vector<Vec3> centers;
  boxes.reserve(m);
  centers.reserve(m);
  double max_dim = 1e-12;
  for (std::size_t e = 0; e < m; ++e) {
    const Segment2& s = prim.segs[e];
    Box b{std::min(s.p.x, s.q.x), std::max(s.p.x, s.q.x), std::min(s.p.y, s.q.y),
          std::max(s.p.y, s.q.y)};
    max_dim = std::max({max_dim, b.x1 - b.x0, b.y1 - b.y0});
    boxes.push_back(b);
    centers.push_back(Vec3{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1), 0.0});
  }
  const double cell = max_dim;
  auto overlaps = [](const Box& a, const Box& b) {
    return a.x0 <= b.x1 + 1e-12 && b.x0 <= a.x1 + 1e-12 && a.y0 <= b.y1 + 1e-12 &&
           b.y0 <= a.y1 + 1e-12;
  };
  return count_pruned(
      d, workers, boxes, cell, overlaps,
      [&](std::size_t i, std::size_t j) { return segment_cross(prim.segs[i], prim.segs[j]); },
      centers);
}

DensityStats density_stats(const Drawing& d) {
  DensityStats s;
  s.n = d.n();
  s.m = d.m();
  const double n2 = static_cast<double>(s.n) * static_cast<double>(s.n);
  s.ordered_density = 2.0 * static_cast<double>(s.m) / n2;
  s.half_density = static_cast<double>(s.m) / n2;
  return s;
}

// ---------------------------------------------------------------------------
// JSON round-trip
// ---------------------------------------------------------------------------

std::string drawing_to_json_text(const Drawing& d) {
  json j;
  if (d.ambient == Ambient::Sphere) {
    j["ambient"] = "sphere";
  } else if (d.domain->is_disk()) {
    const Disk& dk = d.domain->as_disk();
    j["ambient"] = json{{"disk", {dk.center.x, dk.center.y, dk.radius}}};
  } else {
    json poly = json::array();
    for (const Point2& p : d.domain->as_polygon().vertices) poly.push_back({p.x, p.y});
    j["ambient"] = json{{"poly", poly}};
  }

  json verts = json::array();
  if (d.ambient == Ambient::Sphere) {
    for (const UnitVec3& v : d.sphere_vertices) verts.push_back({v.x(), v.y(), v.z()});
  } else {
    for (const Point2& p : d.planar_vertices) verts.push_back({p.x, p.y});
  }
  j["vertices"] = std::move(verts);

  json edges = json::array();
  for (const auto& e : d.edges) edges.push_back({e.first, e.second});
  j["edges"] = std::move(edges);

  j["meta"] = json{{"generator", d.meta.generator}, {"seed", d.meta.seed},
                   {"threshold", d.meta.threshold}};
  return j.dump();
}

void save_drawing(const Drawing& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_drawing: cannot open " + path);
  out << drawing_to_json_text(d) << "\n";
  if (!out) throw std::runtime_error("save_drawing: write failed for " + path);
}

Drawing drawing_from_json_text(const std::string& text, bool strict) {
  const json j = json::parse(text);
  Drawing d;

  const json& amb = j.at("ambient");
  if (amb.is_string() && amb.get<std::string>() == "sphere") {
    d.ambient = Ambient::Sphere;
  } else if (amb.is_object() && amb.contains("disk")) {
    d.ambient = Ambient::Planar;
    const auto v = amb.at("disk");
    d.domain = ConvexDomain::disk({v.at(0).get<double>(), v.at(1).get<double>()},
                                  v.at(2).get<double>());
  } else if (amb.is_object() && amb.contains("poly")) {
    d.ambient = Ambient::Planar;
    std::vector<Point2> pts;
    for (const auto& p : amb.at("poly")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    d.domain = ConvexDomain::polygon(std::move(pts));
  } else {
    throw std::invalid_argument("drawing: unknown ambient");
  }

  for (const auto& v : j.at("vertices")) {
    if (d.ambient == Ambient::Sphere) {
      d.sphere_vertices.push_back(UnitVec3::accept_unit(
          {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()}));
    } else {
      d.planar_vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
  }

  for (const auto& e : j.at("edges")) {
    std::uint32_t a = e.at(0).get<std::uint32_t>();
    std::uint32_t b = e.at(1).get<std::uint32_t>();
    if (a == b) throw std::invalid_argument("drawing: self-loop edge");
    if (a > b) {
      if (strict) throw std::invalid_argument("drawing: edge with i > j in strict mode");
      std::swap(a, b);
    }
    d.edges.emplace_back(a, b);
  }
  if (!strict) {
    std::sort(d.edges.begin(), d.edges.end());
    d.edges.erase(std::unique(d.edges.begin(), d.edges.end()), d.edges.end());
  }

  if (j.contains("meta")) {
    const json& m = j.at("meta");
    d.meta.generator = m.value("generator", std::string{});
    d.meta.seed = m.value("seed", std::uint64_t{0});
    d.meta.threshold = m.value("threshold", 0.0);
  }

  d.validate();
  return d;
}

Drawing load_drawing(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_drawing: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return drawing_from_json_text(text, strict);
}

Drawing jittered(const Drawing& d, double eps, std::uint64_t seed) {
  Drawing out = d;
  if (d.ambient == Ambient::Sphere) {
    for (std::size_t i = 0; i < out.sphere_vertices.size(); ++i) {
      SubStream st(seed, i);
      const Vec3 g{st.normal(), st.normal(), st.normal()};
      out.sphere_vertices[i] = UnitVec3::normalized(out.sphere_vertices[i].vec() + g * eps);
    }
  } else {
    for (std::size_t i = 0; i < out.planar_vertices.size(); ++i) {
      SubStream st(seed, i);
      out.planar_vertices[i].x += eps * st.normal();
      out.planar_vertices[i].y += eps * st.normal();
    }
  }
  return out;
}

Drawing apply_rotation(const Drawing& d, const Rotation& r) {
  if (d.ambient != Ambient::Sphere)
    throw std::invalid_argument("apply_rotation: spherical drawings only");
  Drawing out = d;
  for (UnitVec3& v : out.sphere_vertices) v = r.apply(v);
  return out;
}

Drawing apply_affine(const Drawing& d, const AffineMap& t) {
  if (d.ambient != Ambient::Planar)
    throw std::invalid_argument("apply_affine: planar drawings only");
  Drawing out = d;
  out.domain = t.apply(*d.domain);
  for (Point2& p : out.planar_vertices) p = t.apply(p);
  return out;
}

}  // namespace crosslab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "crosslab/drawing.hpp"

using namespace crosslab;

namespace {
constexpr double kPi = 3.14159265358979323846;

Drawing two_arc_drawing() {
  // equator edge and a meridian edge that crosses it
  Drawing d;
  d.ambient = Ambient::Sphere;
  d.sphere_vertices = {UnitVec3(1, 0, 0), UnitVec3(0, 1, 0),
                       UnitVec3(std::cos(0.5) * std::cos(0.7), std::cos(0.5) * std::sin(0.7),
                                std::sin(0.5)),
                       UnitVec3(std::cos(-0.5) * std::cos(0.7), std::cos(-0.5) * std::sin(0.7),
                                std::sin(-0.5))};
  d.edges = {{0, 1}, {2, 3}};
  return d;
}

}  // namespace

TEST_CASE("threshold generation basics") {
  // t = pi: every non-antipodal pair is an edge
  const Drawing d2 = generate_sphere_threshold(2, kPi, SphereSampler::Random, 1);
  CHECK(d2.m() == 1);

  const Drawing d0 = generate_sphere_threshold(40, 1e-6, SphereSampler::Random, 2);
  CHECK(d0.m() == 0);

  CHECK_THROWS(generate_sphere_threshold(1, 1.0, SphereSampler::Random, 1));
  CHECK_THROWS(generate_sphere_threshold(10, 0.0, SphereSampler::Random, 1));
  CHECK_THROWS(generate_sphere_threshold(10, 4.0, SphereSampler::Random, 1));
}

TEST_CASE("threshold generation matches the quadratic scan") {
  for (int rep = 0; rep < 12; ++rep) {
    SubStream st(71, rep);
    const std::size_t n = 40 + static_cast<std::size_t>(st.uniform() * 160);
    const double t = 0.05 + st.uniform() * 2.8;
    const Drawing d = generate_sphere_threshold(n, t, SphereSampler::Random, 1000 + rep);
    std::set<std::pair<std::uint32_t, std::uint32_t>> expected;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (spherical_distance(d.sphere_vertices[i], d.sphere_vertices[j]) <= t)
          expected.insert({i, j});
    const std::set<std::pair<std::uint32_t, std::uint32_t>> got(d.edges.begin(), d.edges.end());
    CHECK(got == expected);
    d.validate();
  }
}

TEST_CASE("fibonacci threshold density approaches the cap area") {
  const Drawing d = generate_sphere_threshold(10000, kPi / 3, SphereSampler::Fibonacci, 0);
  const DensityStats s = density_stats(d);
  CHECK(std::abs(s.ordered_density - 0.25) < 0.003);
}

TEST_CASE("planar threshold generation") {
  const ConvexDomain sq = ConvexDomain::unit_square();
  const Drawing full = generate_planar_threshold(30, std::sqrt(2.0), sq, 5);
  CHECK(full.m() == 30u * 29u / 2u);

  const Drawing d = generate_planar_threshold(400, 0.1, sq, 7);
  std::size_t expected = 0;
  for (std::uint32_t i = 0; i < 400; ++i)
    for (std::uint32_t j = i + 1; j < 400; ++j)
      if ((d.planar_vertices[i] - d.planar_vertices[j]).norm() <= 0.1) ++expected;
  CHECK(d.m() == expected);

  const Drawing grid =
      generate_planar_threshold(500, 0.08, sq, 9, PlanarSampler::PerturbedGrid);
  CHECK(grid.n() == 500);
  grid.validate();
  for (const Point2& p : grid.planar_vertices) CHECK(sq.contains(p, 0.02));

  // m/n tracks n*pi*r^2/2 up to the boundary deficit
  const Drawing dense = generate_planar_threshold(2000, 0.1, sq, 15);
  const double per_vertex = static_cast<double>(dense.m()) / 2000.0;
  const double bulk = 2000.0 * kPi * 0.01 / 2.0;
  CHECK(per_vertex / bulk > 0.85);
  CHECK(per_vertex / bulk < 1.0);
}

TEST_CASE("counting tiny known cases") {
  const Drawing d = two_arc_drawing();
  CHECK(count_crossings_brute_serial(d).crossings == 1);
  CHECK(count_crossings_brute(d).crossings == 1);
  CHECK(count_crossings_grid(d).crossings == 1);

  // K4 in convex position: one crossing (the diagonals)
  Drawing k4;
  k4.ambient = Ambient::Planar;
  k4.domain = ConvexDomain::unit_square();
  k4.planar_vertices = {{0.05, 0.1}, {0.9, 0.05}, {0.95, 0.9}, {0.1, 0.88}};
  k4.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const CrossingReport rep = count_crossings_brute(k4);
  CHECK(rep.crossings == 1);
  CHECK(rep.adjacent_skipped == 12);  // every pair of K4 edges shares a vertex except 3
  CHECK(rep.pairs_tested == 3);
  CHECK(count_crossings_grid(k4).crossings == 1);

  Drawing empty = k4;
  empty.edges.clear();
  CHECK(count_crossings_grid(empty).crossings == 0);
}

TEST_CASE("engine equivalence on random spherical and planar drawings") {
  for (int rep = 0; rep < 30; ++rep) {
    SubStream st(83, rep);
    const std::size_t n = 20 + static_cast<std::size_t>(st.uniform() * 100);
    const double t = 0.3 + st.uniform() * 1.2;
    const Drawing d = generate_sphere_threshold(n, t, SphereSampler::Random, 400 + rep);
    const CrossingReport serial = count_crossings_brute_serial(d);
    const CrossingReport brute = count_crossings_brute(d);
    const CrossingReport grid = count_crossings_grid(d);
    CHECK(serial.degenerate_pairs == 0);
    CHECK(brute.crossings == serial.crossings);
    CHECK(grid.crossings == serial.crossings);
    CHECK(brute.adjacent_skipped == serial.adjacent_skipped);
  }
  for (int rep = 0; rep < 20; ++rep) {
    SubStream st(89, rep);
    const std::size_t n = 20 + static_cast<std::size_t>(st.uniform() * 80);
    const double r = 0.05 + st.uniform() * 0.5;
    const Drawing d =
        generate_planar_threshold(n, r, ConvexDomain::unit_square(), 500 + rep);
    const CrossingReport serial = count_crossings_brute_serial(d);
    CHECK(count_crossings_brute(d).crossings == serial.crossings);
    CHECK(count_crossings_grid(d).crossings == serial.crossings);
  }
}

TEST_CASE("complete graph on 8 random sphere points: grid equals brute") {
  Drawing d;
  d.ambient = Ambient::Sphere;
  SubStream st(97, 0);
  for (int i = 0; i < 8; ++i) d.sphere_vertices.push_back(sample_uniform_sphere(st));
  for (std::uint32_t i = 0; i < 8; ++i)
    for (std::uint32_t j = i + 1; j < 8; ++j) d.edges.push_back({i, j});
  CHECK(count_crossings_grid(d).crossings == count_crossings_brute(d).crossings);
}

TEST_CASE("rotation and affine invariance of counts") {
  const Drawing d = generate_sphere_threshold(120, 1.0, SphereSampler::Random, 11);
  const std::uint64_t base = count_crossings_grid(d).crossings;
  for (int i = 0; i < 5; ++i) {
    SubStream st(103, i);
    const Drawing rotated = apply_rotation(d, random_rotation(st));
    CHECK(count_crossings_grid(rotated).crossings == base);
  }

  const Drawing p = generate_planar_threshold(150, 0.2, ConvexDomain::unit_square(), 13);
  const std::uint64_t pbase = count_crossings_brute(p).crossings;
  const AffineMap shear(1, 0.8, 0, 1, 3, -1);
  CHECK(count_crossings_brute(apply_affine(p, shear)).crossings == pbase);
}

TEST_CASE("degenerate pairs invalidate the report and jitter recovers") {
  Drawing d;
  d.ambient = Ambient::Sphere;
  // four points on the equator: two disjoint cocircular arcs
  d.sphere_vertices = {UnitVec3(1, 0, 0), UnitVec3(std::cos(0.5), std::sin(0.5), 0),
                       UnitVec3(std::cos(1.2), std::sin(1.2), 0),
                       UnitVec3(std::cos(1.9), std::sin(1.9), 0)};
  d.edges = {{0, 1}, {2, 3}};
  const CrossingReport rep = count_crossings_brute(d);
  CHECK(rep.degenerate_pairs == 1);
  CHECK(!rep.valid());
  CHECK(rep.degenerate_examples.size() == 1);

  const Drawing fixed = jittered(d, 1e-9, 42);
  const CrossingReport rep2 = count_crossings_brute(fixed);
  CHECK(rep2.valid());
  CHECK(rep2.crossings == 0);
}

TEST_CASE("density stats") {
  Drawing d;
  d.ambient = Ambient::Sphere;
  SubStream st(107, 0);
  for (int i = 0; i < 4; ++i) d.sphere_vertices.push_back(sample_uniform_sphere(st));
  d.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const DensityStats s = density_stats(d);
  CHECK(s.ordered_density == doctest::Approx(0.75));
  CHECK(s.half_density == doctest::Approx(0.375));
  d.edges.clear();
  CHECK(density_stats(d).ordered_density == 0.0);
}

TEST_CASE("bounding cap contains the whole arc") {
  for (int rep = 0; rep < 200; ++rep) {
    SubStream st(109, rep);
    const UnitVec3 a = sample_uniform_sphere(st), b = sample_uniform_sphere(st);
    const GeodesicArc arc(a, b);
    const UnitVec3 mid = arc.midpoint();
    const double radius = 0.5 * arc.length();
    const Vec3 dir = (b.vec() - a.vec() * a.vec().dot(b.vec())) * (1.0 / a.vec().cross(b.vec()).norm());
    for (int i = 0; i <= 50; ++i) {
      const UnitVec3 p = exp_map(a, dir, arc.length() * i / 50.0);
      CHECK(spherical_distance(mid, p) <= radius + 1e-9);
    }
  }
}

TEST_CASE("json round-trip is lossless") {
  const Drawing d = generate_sphere_threshold(60, 1.2, SphereSampler::Random, 21);
  const std::string path = "test_drawing_roundtrip.json";
  save_drawing(d, path);
  const Drawing back = load_drawing(path);
  REQUIRE(back.n() == d.n());
  REQUIRE(back.m() == d.m());
  for (std::size_t i = 0; i < d.n(); ++i)
    CHECK(back.sphere_vertices[i].same_point(d.sphere_vertices[i]));
  CHECK(back.edges == d.edges);
  CHECK(back.meta.seed == d.meta.seed);
  std::remove(path.c_str());

  const Drawing p = generate_planar_threshold(40, 0.3, ConvexDomain::disk({0.5, 0.5}, 2.0), 23);
  save_drawing(p, path);
  const Drawing pback = load_drawing(path);
  CHECK(pback.domain->as_disk().radius == 2.0);
  for (std::size_t i = 0; i < p.n(); ++i) {
    CHECK(pback.planar_vertices[i].x == p.planar_vertices[i].x);
    CHECK(pback.planar_vertices[i].y == p.planar_vertices[i].y);
  }
  std::remove(path.c_str());
}

TEST_CASE("load validation") {
  // reversed edge: rejected in strict mode, normalized otherwise
  const std::string reversed = R"({"ambient":"sphere",
    "vertices":[[1,0,0],[0,1,0],[0,0,1]],
    "edges":[[2,0]],"meta":{}})";
  CHECK_THROWS(drawing_from_json_text(reversed, true));
  const Drawing ok = drawing_from_json_text(reversed, false);
  CHECK(ok.edges[0] == std::make_pair(std::uint32_t{0}, std::uint32_t{2}));

  // unit-norm violation beyond 1e-9
  const std::string bad_norm = R"({"ambient":"sphere",
    "vertices":[[1.00001,0,0],[0,1,0]],
    "edges":[[0,1]],"meta":{}})";
  CHECK_THROWS(drawing_from_json_text(bad_norm, true));

  // norm within 1e-9 is accepted
  const std::string ok_norm = R"({"ambient":"sphere",
    "vertices":[[1.0000000001,0,0],[0,1,0]],
    "edges":[[0,1]],"meta":{}})";
  CHECK_NOTHROW(drawing_from_json_text(ok_norm, true));

  CHECK_THROWS(drawing_from_json_text("{not json", true));

  // duplicate vertices rejected
  const std::string dup = R"({"ambient":"sphere",
    "vertices":[[1,0,0],[1,0,0]],
    "edges":[],"meta":{}})";
  CHECK_THROWS(drawing_from_json_text(dup, true));

  // antipodal edge rejected
  const std::string anti = R"({"ambient":"sphere",
    "vertices":[[1,0,0],[-1,0,0]],
    "edges":[[0,1]],"meta":{}})";
  CHECK_THROWS(drawing_from_json_text(anti, true));
}

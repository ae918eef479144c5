#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crosslab/sphere.hpp"

using namespace crosslab;

namespace {
constexpr double kPi = 3.14159265358979323846;

UnitVec3 lat_lon(double lat_deg, double lon_deg) {
  const double lat = lat_deg * kPi / 180.0, lon = lon_deg * kPi / 180.0;
  return UnitVec3::normalized(
      {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)});
}
}  // namespace

TEST_CASE("spherical distance basics") {
  const UnitVec3 ex(1, 0, 0), ey(0, 1, 0);
  SubStream rng(7, 0);
  const UnitVec3 p = sample_uniform_sphere(rng);
  CHECK(spherical_distance(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(spherical_distance(ex, ex.antipode()) == doctest::Approx(kPi));
  CHECK(spherical_distance(ex, ey) == doctest::Approx(kPi / 2));
  // symmetry on random pairs
  for (int i = 0; i < 100; ++i) {
    SubStream st(11, i);
    const UnitVec3 a = sample_uniform_sphere(st), b = sample_uniform_sphere(st);
    CHECK(spherical_distance(a, b) == spherical_distance(b, a));
  }
}

TEST_CASE("tangent frame convention and orthonormality") {
  const TangentFrame pole = tangent_frame(UnitVec3(0, 0, 1));
  // fallback axis: e1 proportional to z_hat x ... with k = x_hat at the pole
  CHECK(std::abs(pole.e1.dot(pole.base.vec())) < 1e-10);
  CHECK(pole.direction(0.0).dot(pole.e1) == doctest::Approx(1.0));
  CHECK(pole.direction(kPi / 2).dot(pole.e2) == doctest::Approx(1.0));

  for (int i = 0; i < 1000; ++i) {
    SubStream st(3, i);
    const TangentFrame f = tangent_frame(sample_uniform_sphere(st));
    CHECK(std::abs(f.e1.dot(f.base.vec())) < 1e-10);
    CHECK(std::abs(f.e2.dot(f.base.vec())) < 1e-10);
    CHECK(std::abs(f.e1.dot(f.e2)) < 1e-10);
    CHECK(std::abs(f.e1.norm() - 1.0) < 1e-10);
    CHECK(std::abs(f.e2.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("exp map identities") {
  const UnitVec3 north(0, 0, 1);
  const Vec3 vx{1, 0, 0};
  CHECK(spherical_distance(exp_map(north, vx, 0.0), north) < 1e-15);
  const UnitVec3 quarter = exp_map(north, vx, kPi / 2);
  CHECK(spherical_distance(quarter, UnitVec3(1, 0, 0)) < 1e-12);

  // d(x, exp_x(s v)) = s across the full range, including s = pi
  for (int i = 0; i < 1000; ++i) {
    SubStream st(5, i);
    const UnitVec3 x = sample_uniform_sphere(st);
    const TangentFrame f = tangent_frame(x);
    const Vec3 v = f.direction(st.uniform() * 2 * kPi);
    const double s = st.uniform() * kPi;
    CHECK(std::abs(spherical_distance(x, exp_map(x, v, s)) - s) < 1e-10);
  }
}

TEST_CASE("arc crossing predicate on meridian/equator constructions") {
  const GeodesicArc equator(UnitVec3(1, 0, 0), UnitVec3(0, 1, 0));
  const GeodesicArc meridian(lat_lon(30, 45), lat_lon(-30, 45));
  CHECK(arc_cross(equator, meridian).is_cross());

  const GeodesicArc above(lat_lon(30, 45), lat_lon(10, 45));
  CHECK(arc_cross(equator, above).outcome == CrossOutcome::NoCross);

  const GeodesicArc equator2(lat_lon(0, 120), lat_lon(0, 160));
  const CrossResult r = arc_cross(equator, equator2);
  CHECK(r.is_degenerate());

  const GeodesicArc shares(UnitVec3(1, 0, 0), UnitVec3(0, 0, 1));
  CHECK(arc_cross(equator, shares).is_degenerate());
}

TEST_CASE("arc crossing symmetry and endpoint swaps") {
  for (int i = 0; i < 2000; ++i) {
    SubStream st(17, i);
    const UnitVec3 a = sample_uniform_sphere(st), b = sample_uniform_sphere(st);
    const UnitVec3 c = sample_uniform_sphere(st), d = sample_uniform_sphere(st);
    const GeodesicArc ab(a, b), ba(b, a), cd(c, d), dc(d, c);
    const CrossOutcome base = arc_cross(ab, cd).outcome;
    CHECK(arc_cross(cd, ab).outcome == base);
    CHECK(arc_cross(ba, cd).outcome == base);
    CHECK(arc_cross(ab, dc).outcome == base);
    CHECK(arc_cross(ba, dc).outcome == base);
  }
}

TEST_CASE("rotation invariance of distance and crossing") {
  for (int i = 0; i < 500; ++i) {
    SubStream st(23, i);
    const Rotation r = random_rotation(st);
    CHECK(r.orthogonality_residual() < 1e-10);
    const UnitVec3 a = sample_uniform_sphere(st), b = sample_uniform_sphere(st);
    CHECK(std::abs(spherical_distance(r.apply(a), r.apply(b)) - spherical_distance(a, b)) <
          1e-10);

    const UnitVec3 c = sample_uniform_sphere(st), d = sample_uniform_sphere(st);
    const CrossResult base = arc_cross(GeodesicArc(a, b), GeodesicArc(c, d));
    if (!base.is_degenerate()) {
      const CrossResult rot =
          arc_cross(GeodesicArc(r.apply(a), r.apply(b)), GeodesicArc(r.apply(c), r.apply(d)));
      CHECK(rot.outcome == base.outcome);
    }
  }
}

TEST_CASE("point to arc distance against dense sampling") {
  // brute-force oracle: min distance over 1e5 points of the arc
  auto oracle = [](const UnitVec3& x, const GeodesicArc& arc) {
    // unit tangent at a pointing toward b
    const Vec3 a = arc.a().vec(), b = arc.b().vec();
    const Vec3 dir = (b - a * a.dot(b)) * (1.0 / a.cross(b).norm());
    double best = 1e300;
    const int n = 100000;
    for (int i = 0; i <= n; ++i) {
      const double s = arc.length() * i / n;
      best = std::min(best, spherical_distance(x, exp_map(arc.a(), dir, s)));
    }
    return best;
  };

  // x on the arc -> 0; pole above the equator -> pi/2
  const GeodesicArc equator(UnitVec3(1, 0, 0), UnitVec3(0, 1, 0));
  CHECK(point_to_arc_distance(lat_lon(0, 30), equator) < 1e-12);
  CHECK(point_to_arc_distance(UnitVec3(0, 0, 1), equator) == doctest::Approx(kPi / 2));

  for (int i = 0; i < 40; ++i) {
    SubStream st(29, i);
    const UnitVec3 a = sample_uniform_sphere(st), b0 = sample_uniform_sphere(st);
    const GeodesicArc arc(a, b0);
    const UnitVec3 x = sample_uniform_sphere(st);
    const double got = point_to_arc_distance(x, arc);
    const double want = oracle(x, arc);
    CHECK(std::abs(got - want) < 1e-6);  // oracle resolution limited by sampling
  }
}

TEST_CASE("uniform sphere sampling: CLT mean and cap masses") {
  const std::uint64_t n = 1000000;
  double sx = 0, sy = 0, sz = 0;
  std::uint64_t cap = 0;
  const double cos_third = std::cos(kPi / 3);
  for (std::uint64_t i = 0; i < n; ++i) {
    SubStream st(101, i);
    const UnitVec3 p = sample_uniform_sphere(st);
    sx += p.x();
    sy += p.y();
    sz += p.z();
    if (p.vec().dot(Vec3{0, 0, 1}) >= cos_third) ++cap;
  }
  // per-coordinate variance is 1/3; 4 sigma CLT band
  const double band = 4.0 / std::sqrt(3.0) / 1000.0;
  CHECK(std::abs(sx / n) < band);
  CHECK(std::abs(sy / n) < band);
  CHECK(std::abs(sz / n) < band);

  // cap of radius pi/3 has normalized area (1 - cos(pi/3))/2 = 1/4
  const double mass = static_cast<double>(cap) / n;
  const double se = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(mass - 0.25) < 4 * se);

  // rotation invariance: rotated stream passes the same cap test
  SubStream rot_stream(555, 0);
  const Rotation r = random_rotation(rot_stream);
  std::uint64_t cap_rot = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    SubStream st(101, i);
    const UnitVec3 p = r.apply(sample_uniform_sphere(st));
    if (p.vec().dot(Vec3{0, 0, 1}) >= cos_third) ++cap_rot;
  }
  CHECK(std::abs(static_cast<double>(cap_rot) / n - 0.25) < 4 * se);
}

TEST_CASE("fibonacci lattice cap masses") {
  CHECK(fibonacci_sphere(1).size() == 1);
  CHECK(std::abs(fibonacci_sphere(1)[0].vec().norm() - 1.0) < 1e-12);

  const auto pts = fibonacci_sphere(10000);
  std::uint64_t hemi = 0, cap = 0;
  const double cos_third = std::cos(kPi / 3);
  for (const auto& p : pts) {
    if (p.z() >= 0.0) ++hemi;
    if (p.vec().dot(Vec3{0, 0, 1}) >= cos_third) ++cap;
  }
  CHECK(std::abs(static_cast<double>(hemi) / pts.size() - 0.5) < 1e-3);
  CHECK(std::abs(static_cast<double>(cap) / pts.size() - 0.25) < 0.01);
}

TEST_CASE("crossing probability of independent uniform quadruples") {
  // sharp formula at full density: (sin pi - pi cos pi)^2 / (8 pi^2) = 1/8
  const std::uint64_t n = 1000000;
  std::uint64_t crossings = 0, degenerate = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    SubStream st(202, i);
    const UnitVec3 a = sample_uniform_sphere(st), b = sample_uniform_sphere(st);
    const UnitVec3 c = sample_uniform_sphere(st), d = sample_uniform_sphere(st);
    const CrossResult r = arc_cross(GeodesicArc(a, b), GeodesicArc(c, d));
    if (r.is_cross()) ++crossings;
    if (r.is_degenerate()) ++degenerate;
  }
  CHECK(degenerate == 0);
  const double p = static_cast<double>(crossings) / n;
  const double se = std::sqrt(0.125 * 0.875 / n);
  CHECK(std::abs(p - 0.125) < 4 * se);
}

TEST_CASE("unit vector construction rejects degenerate input") {
  CHECK_THROWS(UnitVec3::normalized({0, 0, 0}));
  CHECK_THROWS(GeodesicArc(UnitVec3(1, 0, 0), UnitVec3(-1, 0, 0)));
  CHECK_THROWS(fibonacci_sphere(0));
}

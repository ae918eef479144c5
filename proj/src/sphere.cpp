#include "crosslab/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace crosslab {

GeodesicArc::GeodesicArc(const UnitVec3& a, const UnitVec3& b) : a_(a), b_(b) {
  const Vec3 c = a.vec().cross(b.vec());
  const double cn = c.norm();
  if (!(cn > 1e-10)) throw std::invalid_argument("GeodesicArc: endpoints coincide or are antipodal");
  normal_ = c * (1.0 / cn);
  length_ = std::atan2(cn, a.vec().dot(b.vec()));
}

namespace {

enum class Side { Inside, Outside, Borderline };

// Is p (a point on the arc's supporting circle) interior to the shorter arc?
Side arc_interior(const GeodesicArc& arc, const Vec3& p, double eps) {
  const double s1 = arc.a().vec().cross(p).dot(arc.normal());
  const double s2 = p.cross(arc.b().vec()).dot(arc.normal());
  if (std::abs(s1) <= eps || std::abs(s2) <= eps) return Side::Borderline;
  return (s1 > 0.0 && s2 > 0.0) ? Side::Inside : Side::Outside;
}

}  // namespace

CrossResult arc_cross(const GeodesicArc& A, const GeodesicArc& B, const ArcTolerances& tol) {
  // Adjacent edges meet at a vertex, not at a crossing; callers skip them,
  // and the predicate reports the exact-shared-endpoint case as Degenerate.
  if (A.a().same_point(B.a()) || A.a().same_point(B.b()) || A.b().same_point(B.a()) ||
      A.b().same_point(B.b()))
    return CrossResult::degenerate("shared endpoint");

  const Vec3 c = A.normal().cross(B.normal());
  const double cn = c.norm();
  if (cn <= tol.degenerate) return CrossResult::degenerate("cocircular supports");

  const Vec3 p = c * (1.0 / cn);
  bool on_both[2];
  const Vec3 candidates[2] = {p, -p};
  for (int k = 0; k < 2; ++k) {
    const Side sa = arc_interior(A, candidates[k], tol.interior);
    const Side sb = arc_interior(B, candidates[k], tol.interior);
    if (sa == Side::Borderline || sb == Side::Borderline)
      return CrossResult::degenerate("intersection near arc endpoint");
    on_both[k] = (sa == Side::Inside) && (sb == Side::Inside);
  }
  // Both arcs are shorter than pi, so the two antipodal candidates cannot
  // both be interior; "exactly one" collapses to XOR.
  return (on_both[0] != on_both[1]) ? CrossResult::cross() : CrossResult::no_cross();
}

double point_to_arc_distance(const UnitVec3& x, const GeodesicArc& arc) {
  // Foot of the perpendicular on the supporting circle.
  const double xn = x.vec().dot(arc.normal());
  const Vec3 w = x.vec() - arc.normal() * xn;
  const double wn = w.norm();
  if (wn > 1e-14) {
    const Vec3 foot = w * (1.0 / wn);
    if (arc_interior(arc, foot, -1e-12) != Side::Outside) {
      return std::asin(std::min(1.0, std::abs(xn)));
    }
  }
  return std::min(spherical_distance(x, arc.a()), spherical_distance(x, arc.b()));
}

UnitVec3 sample_uniform_sphere(SubStream& rng) {
  for (;;) {
    const Vec3 g{rng.normal(), rng.normal(), rng.normal()};
    const double n = g.norm();
    if (n >= 1e-8) return UnitVec3::normalized(g);
  }
}

std::vector<UnitVec3> fibonacci_sphere(std::size_t n) {
  if (n == 0) throw std::invalid_argument("fibonacci_sphere: n must be >= 1");
  const double golden_angle = 2.39996322972865332;  // 2*pi / phi^2
  std::vector<UnitVec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    pts.push_back(UnitVec3::normalized({r * std::cos(phi), r * std::sin(phi), z}));
  }
  return pts;
}

Rotation random_rotation(SubStream& rng) {
  double q[4];
  for (;;) {
    double n2 = 0.0;
    for (double& qi : q) {
      qi = rng.normal();
      n2 += qi * qi;
    }
    if (n2 >= 1e-16) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& qi : q) qi *= inv;
      break;
    }
  }
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Rotation r;
  r.m[0][0] = 1 - 2 * (y * y + z * z);
  r.m[0][1] = 2 * (x * y - w * z);
  r.m[0][2] = 2 * (x * z + w * y);
  r.m[1][0] = 2 * (x * y + w * z);
  r.m[1][1] = 1 - 2 * (x * x + z * z);
  r.m[1][2] = 2 * (y * z - w * x);
  r.m[2][0] = 2 * (x * z - w * y);
  r.m[2][1] = 2 * (y * z + w * x);
  r.m[2][2] = 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace crosslab

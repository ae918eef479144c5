#include "crosslab/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace crosslab {

Segment2::Segment2(Point2 a, Point2 b) : p(a), q(b) {
  if ((a - b).norm() <= 1e-12) throw std::invalid_argument("Segment2: endpoints coincide");
}

namespace {

// Orientation of r relative to directed segment p->q, with a relative
// degeneracy band: |cross| <= eps * |q-p| * |r-p| counts as zero.
int orientation(const Point2& p, const Point2& q, const Point2& r, double eps, bool& exact_zero_band) {
  const Point2 u = q - p;
  const Point2 v = r - p;
  const double c = u.cross(v);
  const double scale = u.norm() * v.norm();
  if (std::abs(c) <= eps * scale) {
    exact_zero_band = true;
    return 0;
  }
  exact_zero_band = false;
  return c > 0.0 ? 1 : -1;
}

}  // namespace

CrossResult segment_cross(const Segment2& s1, const Segment2& s2, double eps) {
  if (s1.p == s2.p || s1.p == s2.q || s1.q == s2.p || s1.q == s2.q)
    return CrossResult::degenerate("shared endpoint");

  bool z1, z2, z3, z4;
  const int o1 = orientation(s1.p, s1.q, s2.p, eps, z1);
  const int o2 = orientation(s1.p, s1.q, s2.q, eps, z2);
  const int o3 = orientation(s2.p, s2.q, s1.p, eps, z3);
  const int o4 = orientation(s2.p, s2.q, s1.q, eps, z4);

  if (z1 && z2 && z3 && z4) return CrossResult::degenerate("collinear segments");
  if (z1 || z2 || z3 || z4) return CrossResult::degenerate("endpoint within tolerance of a segment");
  return (o1 != o2 && o3 != o4) ? CrossResult::cross() : CrossResult::no_cross();
}

ConvexDomain::ConvexDomain(ConvexPolygon p) : shape_(std::move(p)) {
  const auto& v = std::get<ConvexPolygon>(shape_).vertices;
  const std::size_t n = v.size();
  if (n < 3) throw std::invalid_argument("ConvexDomain: polygon needs at least 3 vertices");

  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice_area += v[i].cross(v[(i + 1) % n]);
  if (!(twice_area > 0.0)) throw std::invalid_argument("ConvexDomain: polygon area must be positive");

  double scale = 0.0;
  for (const auto& p2 : v) scale = std::max({scale, std::abs(p2.x), std::abs(p2.y)});
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = v[(i + 1) % n] - v[i];
    const Point2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
    if (e1.cross(e2) < -1e-12 * std::max(1.0, scale * scale))
      throw std::invalid_argument("ConvexDomain: polygon is not convex");
  }

  // Fan triangulation CDF for area-weighted sampling.
  tri_cdf_.resize(n - 2);
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    acc += 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0]);
    tri_cdf_[i - 1] = acc;
  }
}

ConvexDomain ConvexDomain::disk(Point2 center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ConvexDomain: disk radius must be positive");
  return ConvexDomain(Disk{center, radius});
}

ConvexDomain ConvexDomain::polygon(std::vector<Point2> vertices) {
  // Re-normalize orientation to counterclockwise.
  double twice_area = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) twice_area += vertices[i].cross(vertices[(i + 1) % n]);
  if (twice_area < 0.0) std::reverse(vertices.begin(), vertices.end());
  return ConvexDomain(ConvexPolygon{std::move(vertices)});
}

double ConvexDomain::area() const {
  if (is_disk()) {
    const double r = as_disk().radius;
    return 3.14159265358979323846 * r * r;
  }
  const auto& v = as_polygon().vertices;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice_area += v[i].cross(v[(i + 1) % v.size()]);
  return 0.5 * twice_area;
}

double ConvexDomain::diameter() const {
  if (is_disk()) return 2.0 * as_disk().radius;
  const auto& v = as_polygon().vertices;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]).norm());
  return best;
}

bool ConvexDomain::contains(const Point2& p, double slack) const {
  if (is_disk()) {
    const Disk& d = as_disk();
    return (p - d.center).norm() <= d.radius * (1.0 + slack) + slack;
  }
  const auto& v = as_polygon().vertices;
  const double s = slack * std::max(1.0, diameter());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 e = v[(i + 1) % v.size()] - v[i];
    if (e.cross(p - v[i]) < -s * e.norm()) return false;
  }
  return true;
}

double ConvexDomain::chord_exit(const Point2& x, double theta) const {
  if (!contains(x, 1e-12))
    throw std::invalid_argument("chord_exit: point lies outside the domain");
  const Point2 v{std::cos(theta), std::sin(theta)};

  if (is_disk()) {
    const Disk& dk = as_disk();
    const Point2 d = x - dk.center;
    const double b = d.dot(v);
    const double disc = b * b + dk.radius * dk.radius - d.dot(d);
    return -b + std::sqrt(std::max(0.0, disc));
  }

  const auto& verts = as_polygon().vertices;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Point2 a = verts[i];
    const Point2 e = verts[(i + 1) % verts.size()] - a;
    const double denom = v.cross(e);
    if (std::abs(denom) < 1e-300) continue;  // ray parallel to edge
    const Point2 w = a - x;
    const double s = w.cross(e) / denom;   // along the ray
    const double u = w.cross(v) / denom;   // along the edge
    if (s >= -1e-12 && u >= -1e-9 && u <= 1.0 + 1e-9) best = std::min(best, std::max(0.0, s));
  }
  if (!std::isfinite(best)) throw std::runtime_error("chord_exit: ray missed the boundary");
  return best;
}

Point2 ConvexDomain::sample(SubStream& rng) const {
  if (is_disk()) {
    const Disk& d = as_disk();
    const double r = d.radius * std::sqrt(rng.uniform());
    const double a = 6.28318530717958647692 * rng.uniform();
    return {d.center.x + r * std::cos(a), d.center.y + r * std::sin(a)};
  }
  const auto& v = as_polygon().vertices;
  const double u = rng.uniform() * tri_cdf_.back();
  const std::size_t k =
      static_cast<std::size_t>(std::lower_bound(tri_cdf_.begin(), tri_cdf_.end(), u) - tri_cdf_.begin());
  const Point2& a = v[0];
  const Point2& b = v[k + 1];
  const Point2& c = v[k + 2];
  const double r1 = std::sqrt(rng.uniform());
  const double r2 = rng.uniform();
  // p = (1-r1) a + r1 (1-r2) b + r1 r2 c, uniform on the triangle
  return a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2);
}

std::string ConvexDomain::to_spec() const {
  std::ostringstream os;
  os.precision(17);
  if (is_disk()) {
    const Disk& d = as_disk();
    os << "disk:" << d.center.x << "," << d.center.y << "," << d.radius;
  } else {
    os << "poly:";
    const auto& v = as_polygon().vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ";";
      os << v[i].x << "," << v[i].y;
    }
  }
  return os.str();
}

AffineMap::AffineMap(double a, double b, double c, double d, double e, double f)
    : m00(a), m01(b), m10(c), m11(d), tx(e), ty(f) {
  if (std::abs(det()) <= 1e-14) throw std::invalid_argument("AffineMap: singular linear part");
}

ConvexDomain AffineMap::apply(const ConvexDomain& d) const {
  if (d.is_disk()) {
    // A disk stays a disk only under similarities (M^T M = s^2 I).
    const double g00 = m00 * m00 + m10 * m10;
    const double g11 = m01 * m01 + m11 * m11;
    const double g01 = m00 * m01 + m10 * m11;
    if (std::abs(g00 - g11) > 1e-10 * (g00 + g11) || std::abs(g01) > 1e-10 * (g00 + g11))
      throw std::invalid_argument("AffineMap: non-similarity applied to a disk");
    const Disk& dk = d.as_disk();
    return ConvexDomain::disk(apply(dk.center), dk.radius * std::sqrt(g00));
  }
  std::vector<Point2> v;
  v.reserve(d.as_polygon().vertices.size());
  for (const Point2& p : d.as_polygon().vertices) v.push_back(apply(p));
  return ConvexDomain::polygon(std::move(v));
}

AffineMap AffineMap::inverse() const {
  const double inv_det = 1.0 / det();
  AffineMap r;
  r.m00 = m11 * inv_det;
  r.m01 = -m01 * inv_det;
  r.m10 = -m10 * inv_det;
  r.m11 = m00 * inv_det;
  r.tx = -(r.m00 * tx + r.m01 * ty);
  r.ty = -(r.m10 * tx + r.m11 * ty);
  return r;
}

namespace {

std::vector<double> parse_reals(const std::string& s, char sep) {
  std::vector<double> out;
  std::string token;
  std::istringstream is(s);
  while (std::getline(is, token, sep)) {
    if (token.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("bad number in spec: " + token);
    out.push_back(v);
  }
  return out;
}

}  // namespace

ConvexDomain parse_domain(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("domain spec: missing ':' in " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "disk") {
    const auto v = parse_reals(body, ',');
    if (v.size() != 3) throw std::invalid_argument("domain spec: disk needs cx,cy,r");
    return ConvexDomain::disk({v[0], v[1]}, v[2]);
  }
  if (kind == "poly") {
    std::vector<Point2> pts;
    std::string token;
    std::istringstream is(body);
    while (std::getline(is, token, ';')) {
      const auto v = parse_reals(token, ',');
      if (v.size() != 2) throw std::invalid_argument("domain spec: poly vertex needs x,y");
      pts.push_back({v[0], v[1]});
    }
    return ConvexDomain::polygon(std::move(pts));
  }
  throw std::invalid_argument("domain spec: unknown kind " + kind);
}

}  // namespace crosslab

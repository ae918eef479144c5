#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crosslab/rng.hpp"
#include "crosslab/sphere.hpp"  // CrossResult

namespace crosslab {

struct Point2 {
  double x = 0.0, y = 0.0;

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Point2& o) const { return x * o.x + y * o.y; }
  double cross(const Point2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
};

struct Segment2 {
  Point2 p, q;

  Segment2(Point2 a, Point2 b);
  double length() const { return (q - p).norm(); }
};

/// Cross iff the open segments intersect in exactly one point. Shared
/// endpoints, near-zero orientations, and collinear overlap are Degenerate.
CrossResult segment_cross(const Segment2& s1, const Segment2& s2, double eps = 1e-12);

struct Disk {
  Point2 center;
  double radius;
};

struct ConvexPolygon {
  std::vector<Point2> vertices;  // counterclockwise
};

/// Compact convex region: a disk or a convex polygon. Polygons are stored
/// counterclockwise and validated for convexity at construction.
class ConvexDomain {
 public:
  static ConvexDomain disk(Point2 center, double radius);
  static ConvexDomain polygon(std::vector<Point2> vertices);
  static ConvexDomain unit_square() {
    return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  }

  double area() const;
  double diameter() const;
  bool contains(const Point2& p, double slack = 1e-12) const;

  /// Distance along (cos theta, sin theta) from an interior point to the
  /// boundary. Throws if x lies outside beyond the slack.
  double chord_exit(const Point2& x, double theta) const;

  Point2 sample(SubStream& rng) const;

  bool is_disk() const { return std::holds_alternative<Disk>(shape_); }
  const Disk& as_disk() const { return std::get<Disk>(shape_); }
  const ConvexPolygon& as_polygon() const { return std::get<ConvexPolygon>(shape_); }

  std::string to_spec() const;  // grammar: disk:cx,cy,r | poly:x1,y1;x2,y2;...

 private:
  explicit ConvexDomain(Disk d) : shape_(d) {}
  explicit ConvexDomain(ConvexPolygon p);
  std::variant<Disk, ConvexPolygon> shape_;
  std::vector<double> tri_cdf_;  // fan-triangulation cumulative areas
};

/// Invertible affine map p -> M p + t.
struct AffineMap {
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  double tx = 0, ty = 0;

  AffineMap() = default;
  AffineMap(double a, double b, double c, double d, double e, double f);

  double det() const { return m00 * m11 - m01 * m10; }
  Point2 apply(const Point2& p) const {
    return {m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty};
  }
  Segment2 apply(const Segment2& s) const { return Segment2(apply(s.p), apply(s.q)); }
  /// Polygons transport their vertices; disks only under similarities.
  ConvexDomain apply(const ConvexDomain& d) const;
  AffineMap inverse() const;
};

/// Parses the domain grammar `disk:cx,cy,r` / `poly:x1,y1;x2,y2;...`.
ConvexDomain parse_domain(const std::string& spec);

}  // namespace crosslab

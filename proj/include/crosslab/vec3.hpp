#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace crosslab {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double px, double py, double pz) : x(px), y(py), z(pz) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  constexpr double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Point on the unit sphere. |v| = 1 within 1e-12 after construction.
class UnitVec3 {
 public:
  UnitVec3() : v_(1.0, 0.0, 0.0) {}

  /// Normalizes the input; throws on (near-)zero vectors.
  static UnitVec3 normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 1e-14)) throw std::invalid_argument("UnitVec3: cannot normalize near-zero vector");
    return UnitVec3(v * (1.0 / n), 0);
  }

  UnitVec3(double x, double y, double z) : UnitVec3(normalized(Vec3{x, y, z})) {}

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

  UnitVec3 antipode() const { return UnitVec3(-v_, 0); }

  /// Exact (bitwise) comparison; used to detect shared endpoints.
  bool same_point(const UnitVec3& o) const { return v_ == o.v_; }

  /// For file I/O: accepts a vector whose norm is within `reject_tol` of 1,
  /// keeping its bits when already unit to near machine precision so that
  /// save/load round-trips are lossless.
  static UnitVec3 accept_unit(const Vec3& v, double reject_tol = 1e-9) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > reject_tol)
      throw std::invalid_argument("UnitVec3: vector norm too far from 1");
    if (std::abs(n - 1.0) > 1e-13) return UnitVec3(v * (1.0 / n), 0);
    return UnitVec3(v, 0);
  }

 private:
  UnitVec3(const Vec3& v, int) : v_(v) {}  // trusted, already unit
  Vec3 v_;

  friend UnitVec3 exp_map(const UnitVec3&, const Vec3&, double);
};

inline double spherical_distance(const UnitVec3& a, const UnitVec3& b) {
  // atan2 form is accurate near 0 and pi, unlike acos(a.b).
  return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec()));
}

/// Orthonormal tangent frame at a base point, with a fixed global convention.
struct TangentFrame {
  UnitVec3 base;
  Vec3 e1, e2;

  Vec3 direction(double theta) const { return e1 * std::cos(theta) + e2 * std::sin(theta); }
};

/// Frame convention: e1 = normalize(z_hat x base), falling back to x_hat near the poles.
inline TangentFrame tangent_frame(const UnitVec3& x) {
  Vec3 k{0.0, 0.0, 1.0};
  Vec3 c = k.cross(x.vec());
  if (c.norm() <= 1e-6) {
    k = Vec3{1.0, 0.0, 0.0};
    c = k.cross(x.vec());
  }
  const Vec3 e1 = c * (1.0 / c.norm());
  const Vec3 e2 = x.vec().cross(e1);
  return TangentFrame{x, e1, e2};
}

/// Geodesic flow: cos(s) x + sin(s) v for a unit tangent v at x, s in [0, pi].
inline UnitVec3 exp_map(const UnitVec3& x, const Vec3& v, double s) {
  Vec3 r = x.vec() * std::cos(s) + v * std::sin(s);
  const double n = r.norm();
  return UnitVec3(r * (1.0 / n), 0);
}

/// Proper rotation (det +1), stored row-major.
struct Rotation {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  Vec3 apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  UnitVec3 apply(const UnitVec3& v) const { return UnitVec3::normalized(apply(v.vec())); }

  Rotation transposed() const {
    Rotation r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  /// Max abs entry of R R^T - I; zero for an exact rotation.
  double orthogonality_residual() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * m[j][k];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    }
    return worst;
  }
};

}  // namespace crosslab

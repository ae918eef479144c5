#pragma once

#include <cstddef>
#include <vector>

#include "crosslab/rng.hpp"
#include "crosslab/vec3.hpp"

namespace crosslab {

enum class CrossOutcome { Cross, NoCross, Degenerate };

/// Outcome of a crossing predicate. Degenerate is a surfaced tolerance event,
/// never a silent classification; `reason` points at a static string.
struct CrossResult {
  CrossOutcome outcome = CrossOutcome::NoCross;
  const char* reason = nullptr;

  bool is_cross() const { return outcome == CrossOutcome::Cross; }
  bool is_degenerate() const { return outcome == CrossOutcome::Degenerate; }

  static CrossResult cross() { return {CrossOutcome::Cross, nullptr}; }
  static CrossResult no_cross() { return {CrossOutcome::NoCross, nullptr}; }
  static CrossResult degenerate(const char* why) { return {CrossOutcome::Degenerate, why}; }
};

/// Shorter great-circle arc between two non-antipodal endpoints.
/// The supporting circle's unit normal is cached at construction.
class GeodesicArc {
 public:
  GeodesicArc(const UnitVec3& a, const UnitVec3& b);

  const UnitVec3& a() const { return a_; }
  const UnitVec3& b() const { return b_; }
  const Vec3& normal() const { return normal_; }
  double length() const { return length_; }  // in (0, pi)

  /// Arc midpoint: normalize(a + b); valid because endpoints are not antipodal.
  UnitVec3 midpoint() const { return UnitVec3::normalized(a_.vec() + b_.vec()); }

 private:
  UnitVec3 a_, b_;
  Vec3 normal_;
  double length_;
};

struct ArcTolerances {
  double degenerate = 1e-12;  // on |n_A x n_B|
  double interior = 1e-12;    // on interiority triple products
};

/// Cross iff the two open arcs share exactly one interior point.
/// Shared endpoints, cocircular supports, and candidates within tolerance of
/// an arc endpoint are reported Degenerate.
CrossResult arc_cross(const GeodesicArc& A, const GeodesicArc& B,
                      const ArcTolerances& tol = {});

/// Spherical distance from a point to the nearest point of the closed arc.
double point_to_arc_distance(const UnitVec3& x, const GeodesicArc& arc);

/// Uniform law on the sphere (normalized area measure): normalized Gaussian
/// 3-vector, resampled on underflow.
UnitVec3 sample_uniform_sphere(SubStream& rng);

/// Deterministic quasi-uniform lattice: z equally spaced in (-1, 1),
/// longitude advancing by 2*pi/phi^2 (the golden angle).
std::vector<UnitVec3> fibonacci_sphere(std::size_t n);

/// Haar-distributed rotation from a uniform unit quaternion.
Rotation random_rotation(SubStream& rng);

}  // namespace crosslab

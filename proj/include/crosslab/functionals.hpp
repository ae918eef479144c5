#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crosslab/density.hpp"
#include "crosslab/drawing.hpp"
#include "crosslab/planar.hpp"
#include "crosslab/sphere.hpp"

namespace crosslab {

/// Monte-Carlo estimate with its standard error. Deterministic for fixed
/// (seed, samples): sample i draws from a counter-based substream keyed by
/// (seed, i), and partial sums reduce in fixed chunk order, so the result is
/// bit-identical for any worker count.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t degenerate_hits = 0;
};

struct McOptions {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = auto
};

/// Where the uniform points live: the sphere with its normalized area
/// measure, or a convex planar domain with normalized Lebesgue measure.
struct SampleSpace {
  Ambient ambient = Ambient::Sphere;
  std::optional<ConvexDomain> domain;

  static SampleSpace sphere() { return {Ambient::Sphere, std::nullopt}; }
  static SampleSpace planar(ConvexDomain d) { return {Ambient::Planar, std::move(d)}; }
};

/// e(w): mean of w(x1, x2) over i.i.d. uniform pairs.
McEstimate mc_edge_density(const SampleSpace& space, const EdgeDensity& w, const McOptions& opt);

/// Cr(w): mean of w(x1,x2) w(x3,x4) [crossing] over i.i.d. 4-tuples.
/// Degenerate predicate outcomes contribute 0 and are tallied; a nonzero
/// tally at default tolerances indicates a bug or adversarial input.
McEstimate mc_crossing_functional(const SampleSpace& space, const EdgeDensity& w,
                                  const McOptions& opt);

/// Crossing and incidence fluxes at (x, theta). Quadrature over the triangle
/// {s,r > 0, s+r < pi} in coordinates u = s+r, z = s; weight sin(u) for g
/// and sin(u)/u for a, times the fiber integral of w. Throws on
/// non-convergence.
double flux_g(const EdgeDensity& w, const UnitVec3& x, double theta, double tol);
double flux_a(const EdgeDensity& w, const UnitVec3& x, double theta, double tol);

/// Planar fluxes: integrals against (s+r) and 1 out to the chord exits.
double flux_g_planar(const ConvexDomain& domain, const EdgeDensity& w, const Point2& x,
                     double theta, double tol);
double flux_a_planar(const ConvexDomain& domain, const EdgeDensity& w, const Point2& x,
                     double theta, double tol);

struct FluxRepReport {
  double value = 0.0;      // estimate of Cr(w) via the flux identity
  double quad_error = 0.0; // accumulated quadrature error estimate
  int x_nodes = 0;
  int theta_grid = 0;
};

/// Cr(w) assembled as the triple integral of g(x,th) g(x,ph) |sin(th-ph)|:
/// deterministic Fibonacci nodes for the outer sphere integral, periodic
/// trapezoid (with kink correction) for the angular double integral.
FluxRepReport flux_crossing_representation(const EdgeDensity& w, int x_nodes, int theta_grid,
                                           double tol);

struct IncidenceReport {
  double lhs = 0.0;  // e(w), closed form when available, MC otherwise
  double rhs = 0.0;  // integral of the incidence flux
  double gap = 0.0;
  bool lhs_is_closed_form = true;
};

IncidenceReport incidence_identity_check(const EdgeDensity& w, int x_nodes, int theta_grid,
                                         double tol, const McOptions& mc_fallback = {});

/// Bathtub profile: tau(alpha) with 16 pi^2 alpha = 1 - cos tau, and
/// phi(alpha) = (sin tau - tau cos tau) / (4 pi)^2.
double bathtub_tau(double alpha);
double bathtub_phi(double alpha);
double bathtub_alpha_max();  // 1/(8 pi^2)

/// Minimal cost of int u dnu over measures 0 <= dnu <= sin(u) du on (0, pi)
/// with total mass M, via greedy left fill on a midpoint discretization.
double bathtub_left_fill_oracle(double mass, int grid);

struct ConvexityReport {
  double worst_second_difference = 0.0;  // of phi^{2/3} on a uniform alpha grid
  double worst_tau_inequality = 0.0;     // of 3(1 - tau cot tau) - tau^2
};

ConvexityReport convexity_check(int grid);

/// sin(t) - t cos(t), series-stabilized for small t.
double sin_minus_tcos(double t);

/// Sharp spherical lower bound (sin t - t cos t)^2 / (8 pi^2), cos t = 1-2e.
double theoretical_sphere_bound(double e);

/// Planar lower bound (8 / (9 pi^2)) e^3.
double theoretical_planar_bound(double e);

/// Discrete spherical bound n^4 (sin t - t cos t)^2 / (64 pi^2).
double discrete_sphere_bound(double n, double e);

/// theoretical_sphere_bound(e(t)) / e(t)^3 with e(t) = (1-cos t)/2;
/// tends to 8/(9 pi^2) as t -> 0.
double midrange_limit_ratio(double t);

/// Pointwise planar slack g - (2 sqrt(2)/3) A a^{3/2} at (x, theta).
double planar_pointwise_bound_check(const ConvexDomain& domain, const EdgeDensity& w,
                                    const Point2& x, double theta, double tol);

struct SmoothingReport {
  McEstimate lhs;          // MC estimate of Cr(w_{n,delta})
  double rhs = 0.0;        // 8 cr(D) / n^4
  double gap = 0.0;        // lhs - rhs
  std::uint64_t crossings = 0;
  double delta = 0.0;
  double eta_grid = 0.0;
};

/// Compares the smoothed crossing functional against 8 cr/n^4 (exact count).
SmoothingReport smoothing_consistency(const Drawing& d, double delta, const McOptions& opt);

}  // namespace crosslab

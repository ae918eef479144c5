#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crosslab/drawing.hpp"
#include "crosslab/planar.hpp"
#include "crosslab/sphere.hpp"

namespace crosslab {

/// Smooth radial bump kernel on the sphere: k(u) = exp(-1/(1-(u/delta)^2))
/// for u < delta, scaled so that the kernel integrates to 1 against the
/// normalized area measure in its second argument.
struct RadialKernel {
  double delta = 0.1;
  double normalization = 1.0;  // integral of the raw profile against mu

  static RadialKernel make(double delta);

  double profile(double u) const {
    if (!(u < delta)) return 0.0;
    const double s = u / delta;
    return std::exp(-1.0 / (1.0 - s * s));
  }
  double operator()(double dist) const { return profile(dist) / normalization; }

  /// Numerical sup of |d/du K(u)|, used for the eta slack term.
  double lipschitz() const;
};

struct SmoothedData;  // defined in density.cpp

/// Symmetric edge density w with values in [0,1] (the kernel-smoothed kind
/// may exceed 1 pointwise and is paired with its vertex density, see
/// SmoothedPair). Immutable and safe to share across threads.
class EdgeDensity {
 public:
  enum class Kind { Threshold, Band, Constant, Smoothed };

  Ambient ambient() const { return ambient_; }
  Kind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }
  double scale() const { return scale_; }

  double evaluate(const UnitVec3& x, const UnitVec3& y) const;
  double evaluate(const Point2& x, const Point2& y) const;

  /// As a function of distance only (all built-in kinds except Smoothed).
  bool is_isotropic() const { return kind_ != Kind::Smoothed; }

  /// Exact ordered edge density where available: spherical threshold/band/
  /// constant closed forms and the smoothed density's 2|E|/n^2.
  std::optional<double> closed_form_edge_density() const;

  /// Kernel radius for smoothed densities; the scale below which quadrature
  /// panels must not be skipped.
  std::optional<double> smoothing_scale() const;

  std::string describe() const;

  static EdgeDensity threshold_sphere(double t);
  static EdgeDensity band_sphere(double t1, double t2);
  static EdgeDensity threshold_planar(double r);
  static EdgeDensity band_planar(double r1, double r2);
  static EdgeDensity constant(Ambient ambient, double p);

  const std::shared_ptr<const SmoothedData>& smoothed_data() const { return smoothed_; }

 private:
  friend struct SmoothedPair;
  friend EdgeDensity rescale_near_uniform(const struct SmoothedPair&);
  friend SmoothedPair smoothed_from_drawing(const Drawing&, double, std::size_t);
  EdgeDensity() = default;

  Ambient ambient_ = Ambient::Sphere;
  Kind kind_ = Kind::Constant;
  double p1_ = 0.0, p2_ = 0.0;
  double scale_ = 1.0;
  std::shared_ptr<const SmoothedData> smoothed_;
};

/// t with cos t = 1 - 2e: the threshold radius realizing ordered density e.
double threshold_for_density(double e);

/// Kernel smoothing of a finite spherical drawing: the vertex density rho,
/// the edge density w, and the sup-norm deviation eta of rho from 1
/// (grid maximum plus a Lipschitz slack, both reported).
struct SmoothedPair {
  EdgeDensity w;
  double eta_grid = 0.0;   // max |rho - 1| over the probe grid
  double eta = 0.0;        // eta_grid + Lipschitz slack
  double mesh = 0.0;       // probe grid covering radius estimate

  double rho(const UnitVec3& x) const;
  const RadialKernel& kernel() const;
  std::size_t vertex_count() const;
};

/// Builds rho_{n,delta} and w_{n,delta} from a spherical drawing.
/// eta_probe_points controls the grid used for the sup-norm estimate.
SmoothedPair smoothed_from_drawing(const Drawing& d, double delta,
                                   std::size_t eta_probe_points = 100000);

/// w / (1+eta)^2: an admissible density with values in [0,1].
EdgeDensity rescale_near_uniform(const SmoothedPair& sp);

/// Density grammar: threshold:t | band:t1,t2 | const:p | smoothed:<file>,delta
EdgeDensity parse_density(const std::string& spec, Ambient ambient);

}  // namespace crosslab

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace crosslab {

/// B(f, f) = sum_{i,j} f_i f_j |sin(th_i - th_j)| h^2 over the uniform
/// periodic grid th_i = 2 pi i / N, plus the Euler-Maclaurin correction for
/// the kernel kinks at th_i - th_j in {0, pi} (the kinks sit on nodes, so
/// the corrected rule is O(h^4) for smooth f). N must be even.
double periodic_sin_form(const std::vector<double>& values);

/// Nonnegative density on the circle: values on a uniform grid over
/// [0, 2 pi), evaluated with periodic linear interpolation. An optional
/// generator allows exact re-evaluation on refined grids.
class CircleDensity {
 public:
  CircleDensity(std::vector<double> values);
  static CircleDensity constant(double c, std::size_t grid = 2048);
  /// coeffs: a0, a1, b1, a2, b2, ...; negative values are clipped at 0.
  static CircleDensity trig(const std::vector<double>& coeffs, std::size_t grid = 2048);
  /// Radial-cubed ellipse density r_E(th)^3, r_E = (cos^2/p^2 + sin^2/q^2)^{-1/2}.
  static CircleDensity ellipse(double p, double q, std::size_t grid = 2048);
  static CircleDensity from_function(const std::function<double(double)>& f,
                                     std::size_t grid = 2048);

  std::size_t grid() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double eval(double theta) const;  // periodic linear interpolation

  /// Same density re-sampled at factor times the grid size (exact when a
  /// generator is attached, interpolated otherwise).
  CircleDensity refined(std::size_t factor = 2) const;

  bool is_pi_periodic(double tol = 1e-12) const;

 private:
  std::vector<double> values_;
  std::optional<std::function<double(double)>> generator_;
};

double circle_form(const CircleDensity& f);                     // B(f,f)
double circle_form_series(const CircleDensity& f, int modes);   // cosine-series cross-check
double circle_bound(const CircleDensity& f);                    // (1/pi^2) (int f^{2/3})^3

struct SlackReport {
  double form = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double quad_error = 0.0;  // estimated from grid doubling
};

SlackReport circle_check(const CircleDensity& f);

/// f_bar(th) = (f(th) + f(th + pi)) / 2.
CircleDensity pi_periodize(const CircleDensity& f);

/// Density on an interval, zero outside, trapezoid-based. The optional tail
/// model q(u) ~ coeff (1+u^2)^{-3/2} beyond the interval carries the slow
/// decay produced by the tangent substitution.
class LineDensity {
 public:
  LineDensity(double lo, double hi, std::vector<double> values);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& values() const { return values_; }
  double step() const { return (hi_ - lo_) / static_cast<double>(values_.size() - 1); }

  void set_cubic_tail(double coeff) { tail_coeff_ = coeff; }
  std::optional<double> cubic_tail() const { return tail_coeff_; }

 private:
  double lo_, hi_;
  std::vector<double> values_;
  std::optional<double> tail_coeff_;
};

struct TransferReport {
  LineDensity q;
  double tail_bound;  // analytic bound on the neglected 2/3-integral tail
};

/// q(u) = f(arctan u) / (1+u^2)^{3/2} on [-L, L] for pi-periodic f, with the
/// cubic tail model attached (coefficient f(pi/2)).
TransferReport tangent_transfer(const CircleDensity& f, double truncation = 1000.0,
                                std::size_t nodes = (std::size_t{1} << 22) + 1);

double line_form(const LineDensity& q);             // prefix-sum layer-cake, O(grid)
double line_form_double_sum(const LineDensity& q);  // O(grid^2) oracle
double line_bound(const LineDensity& q);            // (2/pi^2) (int q^{2/3})^3
SlackReport line_check(const LineDensity& q);

/// Circle density grammar: const:c | trig:a0,a1,b1,... | ellipse:p,q | grid:<file>
CircleDensity parse_circle_density(const std::string& spec, std::size_t grid = 2048);

}  // namespace crosslab

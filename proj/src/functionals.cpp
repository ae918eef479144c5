#include "crosslab/functionals.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "crosslab/busemann.hpp"
#include "crosslab/parallel.hpp"
#include "crosslab/quadrature.hpp"

namespace crosslab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPiSqInv = 1.0 / (16.0 * kPi * kPi);  // 1/(4 pi)^2

McEstimate to_estimate(const MeanAccum& acc, const McOptions& opt) {
  McEstimate e;
  e.value = acc.mean();
  e.std_error = acc.std_error();
  e.samples = acc.count;
  e.seed = opt.seed;
  e.degenerate_hits = acc.flagged;
  return e;
}

}  // namespace

McEstimate mc_edge_density(const SampleSpace& space, const EdgeDensity& w, const McOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("mc_edge_density: samples >= 1");
  MeanAccum acc;
  if (space.ambient == Ambient::Sphere) {
    acc = chunked_mean(opt.samples, opt.workers, [&](std::uint64_t i, MeanAccum&) {
      SubStream st(opt.seed, i);
      const UnitVec3 x1 = sample_uniform_sphere(st);
      const UnitVec3 x2 = sample_uniform_sphere(st);
      return w.evaluate(x1, x2);
    });
  } else {
    const ConvexDomain& dom = *space.domain;
    acc = chunked_mean(opt.samples, opt.workers, [&](std::uint64_t i, MeanAccum&) {
      SubStream st(opt.seed, i);
      const Point2 x1 = dom.sample(st);
      const Point2 x2 = dom.sample(st);
      return w.evaluate(x1, x2);
    });
  }
  return to_estimate(acc, opt);
}

McEstimate mc_crossing_functional(const SampleSpace& space, const EdgeDensity& w,
                                  const McOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("mc_crossing_functional: samples >= 1");
  MeanAccum acc;
  if (space.ambient == Ambient::Sphere) {
    acc = chunked_mean(opt.samples, opt.workers, [&](std::uint64_t i, MeanAccum& a) {
      SubStream st(opt.seed, i);
      const UnitVec3 x1 = sample_uniform_sphere(st);
      const UnitVec3 x2 = sample_uniform_sphere(st);
      const UnitVec3 x3 = sample_uniform_sphere(st);
      const UnitVec3 x4 = sample_uniform_sphere(st);
      const double w12 = w.evaluate(x1, x2);
      const double w34 = w.evaluate(x3, x4);
      if (w12 == 0.0 || w34 == 0.0) return 0.0;
      const CrossResult r = arc_cross(GeodesicArc(x1, x2), GeodesicArc(x3, x4));
      if (r.is_degenerate()) {
        ++a.flagged;
        return 0.0;
      }
      return r.is_cross() ? w12 * w34 : 0.0;
    });
  } else {
    const ConvexDomain& dom = *space.domain;
    acc = chunked_mean(opt.samples, opt.workers, [&](std::uint64_t i, MeanAccum& a) {
      SubStream st(opt.seed, i);
      const Point2 x1 = dom.sample(st);
      const Point2 x2 = dom.sample(st);
      const Point2 x3 = dom.sample(st);
      const Point2 x4 = dom.sample(st);
      const double w12 = w.evaluate(x1, x2);
      const double w34 = w.evaluate(x3, x4);
      if (w12 == 0.0 || w34 == 0.0) return 0.0;
      const CrossResult r = segment_cross(Segment2(x1, x2), Segment2(x3, x4));
      if (r.is_degenerate()) {
        ++a.flagged;
        return 0.0;
      }
      return r.is_cross() ? w12 * w34 : 0.0;
    });
  }
  return to_estimate(acc, opt);
}

// ---------------------------------------------------------------------------
// Fluxes
// ---------------------------------------------------------------------------

namespace {

void check_flux_tol(double tol) {
  if (!(tol >= 1e-9) || !(tol <= 1e-3))
    throw std::invalid_argument("flux quadrature: tol must lie in [1e-9, 1e-3]");
}

// Distance-only evaluation for the closed-form density families; the fiber
// integral then collapses to u * profile(u).
std::optional<double> radial_profile(const EdgeDensity& w, double dist) {
  switch (w.kind()) {
    case EdgeDensity::Kind::Constant:
      return w.scale() * w.param1();
    case EdgeDensity::Kind::Threshold:
      return dist <= w.param1() ? w.scale() : 0.0;
    case EdgeDensity::Kind::Band:
      return (w.param1() <= dist && dist <= w.param2()) ? w.scale() : 0.0;
    default:
      return std::nullopt;
  }
}

double flux_sphere(const EdgeDensity& w, const UnitVec3& x, double theta, double tol,
                   bool incidence) {
  check_flux_tol(tol);
  if (w.ambient() != Ambient::Sphere) throw std::invalid_argument("flux: spherical density required");
  const TangentFrame frame = tangent_frame(x);
  const Vec3 v = frame.direction(theta);
  const Vec3 vneg = -v;

  auto weight = [incidence](double u) { return incidence ? std::sin(u) / u : std::sin(u); };

  QuadResult res;
  if (w.is_isotropic()) {
    // Both fiber endpoints lie on one great circle at separation u, so the
    // inner integral is u * w(u).
    res = integrate_adaptive(
        [&](double u) { return weight(u) * u * *radial_profile(w, u); }, 0.0, kPi, tol);
  } else {
    // The smoothed density varies at the kernel scale; pre-split so panels
    // cannot step over entire bumps.
    const double split = 0.5 * w.smoothing_scale().value_or(kPi / 64.0);
    res = integrate_adaptive_2d(
        [&](double u, double z) {
          return weight(u) * w.evaluate(exp_map(x, v, z), exp_map(x, vneg, u - z));
        },
        0.0, kPi, [](double) { return 0.0; }, [](double u) { return u; }, tol, split);
  }
  if (!res.converged) {
    std::ostringstream os;
    os << "flux quadrature did not converge; achieved " << res.value << " +- " << res.abs_error;
    throw std::runtime_error(os.str());
  }
  return kFourPiSqInv * res.value;
}

}  // namespace

double flux_g(const EdgeDensity& w, const UnitVec3& x, double theta, double tol) {
  return flux_sphere(w, x, theta, tol, false);
}

double flux_a(const EdgeDensity& w, const UnitVec3& x, double theta, double tol) {
  return flux_sphere(w, x, theta, tol, true);
}

namespace {

double flux_planar(const ConvexDomain& domain, const EdgeDensity& w, const Point2& x, double theta,
                   double tol, bool incidence) {
  check_flux_tol(tol);
  if (w.ambient() != Ambient::Planar) throw std::invalid_argument("flux: planar density required");
  const double s_plus = domain.chord_exit(x, theta);
  const double r_plus = domain.chord_exit(x, theta + kPi);
  if (s_plus <= 0.0 || r_plus <= 0.0) return 0.0;
  const Point2 v{std::cos(theta), std::sin(theta)};
  const double area = domain.area();

  // w == const has exact forms; used as the fast path and validated against
  // the generic quadrature in the tests.
  if (w.kind() == EdgeDensity::Kind::Constant) {
    const double c = w.scale() * w.param1();
    if (incidence) return c * s_plus * r_plus / (area * area);
    return c * s_plus * r_plus * (s_plus + r_plus) / (2.0 * area * area);
  }

  QuadResult res = integrate_adaptive_2d(
      [&](double s, double r) {
        const double val = w.evaluate(x + v * s, x - v * r);
        return incidence ? val : (s + r) * val;
      },
      0.0, s_plus, [&](double) { return 0.0; }, [&](double) { return r_plus; }, tol);
  if (!res.converged) throw std::runtime_error("planar flux quadrature did not converge");
  return res.value / (area * area);
}

}  // namespace

double flux_g_planar(const ConvexDomain& domain, const EdgeDensity& w, const Point2& x,
                     double theta, double tol) {
  return flux_planar(domain, w, x, theta, tol, false);
}

double flux_a_planar(const ConvexDomain& domain, const EdgeDensity& w, const Point2& x,
                     double theta, double tol) {
  return flux_planar(domain, w, x, theta, tol, true);
}

FluxRepReport flux_crossing_representation(const EdgeDensity& w, int x_nodes, int theta_grid,
                                           double tol) {
  if (theta_grid < 64 || theta_grid % 2 != 0)
    throw std::invalid_argument("flux_crossing_representation: theta_grid must be even and >= 64");
  if (x_nodes < 1) throw std::invalid_argument("flux_crossing_representation: x_nodes >= 1");

  const std::vector<UnitVec3> nodes = fibonacci_sphere(static_cast<std::size_t>(x_nodes));
  FluxRepReport rep;
  rep.x_nodes = x_nodes;
  rep.theta_grid = theta_grid;

  std::vector<double> g_vals(static_cast<std::size_t>(theta_grid));
  double sum = 0.0;
  for (const UnitVec3& x : nodes) {
    for (int j = 0; j < theta_grid; ++j) {
      const double th = 2.0 * kPi * j / theta_grid;
      g_vals[static_cast<std::size_t>(j)] = flux_g(w, x, th, tol);
    }
    sum += periodic_sin_form(g_vals);
  }
  rep.value = 4.0 * kPi * sum / static_cast<double>(x_nodes);
  rep.quad_error = tol * std::abs(rep.value);
  return rep;
}

IncidenceReport incidence_identity_check(const EdgeDensity& w, int x_nodes, int theta_grid,
                                         double tol, const McOptions& mc_fallback) {
  if (theta_grid < 8) throw std::invalid_argument("incidence_identity_check: theta_grid too small");
  const std::vector<UnitVec3> nodes = fibonacci_sphere(static_cast<std::size_t>(x_nodes));

  double sum = 0.0;
  for (const UnitVec3& x : nodes) {
    double ring = 0.0;
    for (int j = 0; j < theta_grid; ++j) {
      const double th = 2.0 * kPi * j / theta_grid;
      ring += flux_a(w, x, th, tol);
    }
    sum += ring * (2.0 * kPi / theta_grid);
  }

  IncidenceReport rep;
  rep.rhs = 4.0 * kPi * sum / static_cast<double>(x_nodes);
  if (const auto closed = w.closed_form_edge_density()) {
    rep.lhs = *closed;
    rep.lhs_is_closed_form = true;
  } else {
    rep.lhs = mc_edge_density(SampleSpace::sphere(), w, mc_fallback).value;
    rep.lhs_is_closed_form = false;
  }
  rep.gap = rep.lhs - rep.rhs;
  return rep;
}

// ---------------------------------------------------------------------------
// Bathtub profile and convexity
// ---------------------------------------------------------------------------

double bathtub_alpha_max() { return 1.0 / (8.0 * kPi * kPi); }

double bathtub_tau(double alpha) {
  if (!(alpha >= 0.0) || !(alpha <= bathtub_alpha_max() * (1.0 + 1e-12)))
    throw std::invalid_argument("bathtub_tau: alpha outside [0, 1/(8 pi^2)]");
  // 16 pi^2 alpha = 1 - cos tau = 2 sin^2(tau/2)
  const double s = std::sqrt(std::min(1.0, 8.0 * kPi * kPi * alpha));
  return 2.0 * std::asin(s);
}

double sin_minus_tcos(double t) {
  if (std::abs(t) >= 0.5) return std::sin(t) - t * std::cos(t);
  // sum_{k>=1} (-1)^{k+1} 2k t^{2k+1} / (2k+1)!
  const double t2 = t * t;
  double term = t2 * t / 3.0;  // k = 1
  double sum = term;
  for (int k = 2; k <= 12; ++k) {
    term *= -t2 / ((2.0 * k + 1.0) * (2.0 * k - 2.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double bathtub_phi(double alpha) {
  const double tau = bathtub_tau(alpha);
  return sin_minus_tcos(tau) * kFourPiSqInv;
}

double bathtub_left_fill_oracle(double mass, int grid) {
  if (!(mass >= 0.0) || !(mass <= 2.0))
    throw std::invalid_argument("bathtub_left_fill_oracle: mass outside [0, 2]");
  if (grid < 1000) throw std::invalid_argument("bathtub_left_fill_oracle: grid >= 1000");

  const double h = kPi / grid;
  std::vector<double> cap(static_cast<std::size_t>(grid));
  double total = 0.0;
  for (int i = 0; i < grid; ++i) {
    cap[static_cast<std::size_t>(i)] = std::sin((i + 0.5) * h) * h;
    total += cap[static_cast<std::size_t>(i)];
  }
  // Rescale capacities so the discrete measure has total mass exactly 2.
  const double fix = 2.0 / total;

  double remaining = mass;
  double cost = 0.0;
  for (int i = 0; i < grid && remaining > 0.0; ++i) {
    const double take = std::min(remaining, cap[static_cast<std::size_t>(i)] * fix);
    cost += take * (i + 0.5) * h;
    remaining -= take;
  }
  return cost;
}

namespace {

// 3(1 - tau cot tau) - tau^2, evaluated as a positive-definite series for
// small tau where the direct form cancels catastrophically.
double tau_convexity_expr(double tau) {
  const double s = std::sin(tau);
  if (tau >= 1.0) return (3.0 * (s - tau * std::cos(tau)) - tau * tau * s) / s;
  // numerator = sum_{k>=2} (-1)^k 4k(k-1) tau^{2k+1} / (2k+1)!
  const double t2 = tau * tau;
  double sum = 0.0;
  double pow_t = tau * t2 * t2;  // tau^5
  double fact = 120.0;           // 5!
  for (int k = 2; k <= 16; ++k) {
    const double coeff = 4.0 * k * (k - 1.0) * ((k % 2 == 0) ? 1.0 : -1.0);
    const double term = coeff * pow_t / fact;
    sum += term;
    if (std::abs(term) < 1e-20 * std::abs(sum) && k > 3) break;
    pow_t *= t2;
    fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
  }
  return sum / s;
}

}  // namespace

ConvexityReport convexity_check(int grid) {
  if (grid < 1000) throw std::invalid_argument("convexity_check: grid >= 1000");
  ConvexityReport rep;
  rep.worst_second_difference = std::numeric_limits<double>::infinity();
  rep.worst_tau_inequality = std::numeric_limits<double>::infinity();

  const double amax = bathtub_alpha_max();
  const double da = amax / grid;
  double prev2 = std::cbrt(bathtub_phi(0.0)) * std::cbrt(bathtub_phi(0.0));
  double prev1 = std::cbrt(bathtub_phi(da)) * std::cbrt(bathtub_phi(da));
  for (int i = 2; i <= grid; ++i) {
    const double phi = bathtub_phi(std::min(amax, i * da));
    const double cur = std::cbrt(phi) * std::cbrt(phi);
    rep.worst_second_difference = std::min(rep.worst_second_difference, cur - 2.0 * prev1 + prev2);
    prev2 = prev1;
    prev1 = cur;
  }

  const double lo = 1e-6, hi = kPi - 1e-6;
  for (int i = 0; i <= grid; ++i) {
    const double tau = lo + (hi - lo) * i / grid;
    rep.worst_tau_inequality = std::min(rep.worst_tau_inequality, tau_convexity_expr(tau));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Closed-form bounds
// ---------------------------------------------------------------------------

double theoretical_sphere_bound(double e) {
  if (!(e >= 0.0) || !(e <= 1.0))
    throw std::invalid_argument("theoretical_sphere_bound: e outside [0,1]");
  const double t = 2.0 * std::asin(std::min(1.0, std::sqrt(e)));  // cos t = 1 - 2e
  const double s = sin_minus_tcos(t);
  return s * s / (8.0 * kPi * kPi);
}

double theoretical_planar_bound(double e) {
  if (!(e >= 0.0)) throw std::invalid_argument("theoretical_planar_bound: e must be >= 0");
  return 8.0 / (9.0 * kPi * kPi) * e * e * e;
}

double discrete_sphere_bound(double n, double e) {
  if (!(n >= 0.0)) throw std::invalid_argument("discrete_sphere_bound: n must be >= 0");
  const double t = 2.0 * std::asin(std::min(1.0, std::sqrt(e)));
  const double s = sin_minus_tcos(t);
  return n * n * n * n * s * s / (64.0 * kPi * kPi);
}

double midrange_limit_ratio(double t) {
  if (!(t > 0.0) || !(t <= kPi)) throw std::invalid_argument("midrange_limit_ratio: t in (0, pi]");
  const double half = std::sin(0.5 * t);
  const double e = half * half;  // (1 - cos t)/2
  const double s = sin_minus_tcos(t);
  return s * s / (8.0 * kPi * kPi * e * e * e);
}

double planar_pointwise_bound_check(const ConvexDomain& domain, const EdgeDensity& w,
                                    const Point2& x, double theta, double tol) {
  const double g = flux_g_planar(domain, w, x, theta, tol);
  const double a = flux_a_planar(domain, w, x, theta, tol);
  return g - (2.0 * std::sqrt(2.0) / 3.0) * domain.area() * a * std::sqrt(a);
}

SmoothingReport smoothing_consistency(const Drawing& d, double delta, const McOptions& opt) {
  const SmoothedPair sp = smoothed_from_drawing(d, delta);
  const CrossingReport cr = count_crossings_grid(d, opt.workers);
  if (!cr.valid())
    throw std::runtime_error("smoothing_consistency: degenerate pairs invalidated the exact count");

  SmoothingReport rep;
  rep.delta = delta;
  rep.eta_grid = sp.eta_grid;
  rep.crossings = cr.crossings;
  const double n = static_cast<double>(d.n());
  rep.rhs = 8.0 * static_cast<double>(cr.crossings) / (n * n * n * n);
  rep.lhs = mc_crossing_functional(SampleSpace::sphere(), sp.w, opt);
  rep.gap = rep.lhs.value - rep.rhs;
  return rep;
}

}  // namespace crosslab

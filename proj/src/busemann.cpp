#include "crosslab/busemann.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crosslab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

double periodic_sin_form(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("periodic_sin_form: grid must be even and >= 8");
  const double h = kTwoPi / static_cast<double>(n);

  // |sin| sampled once per circulant offset.
  std::vector<double> kernel(n);
  for (std::size_t d = 0; d < n; ++d) kernel[d] = std::abs(std::sin(h * static_cast<double>(d)));

  double form = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += values[j] * kernel[(i + n - j) % n];
    form += values[i] * row;
  }
  form *= h * h;

  // Kink correction: the kernel's derivative jumps by 2 at offsets 0 and pi,
  // both of which land on grid nodes.
  const std::size_t half = n / 2;
  double corr = 0.0;
  for (std::size_t i = 0; i < n; ++i) corr += values[i] * (values[i] + values[(i + half) % n]);
  form += (h * h * h / 6.0) * corr;
  return form;
}

CircleDensity::CircleDensity(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 8) throw std::invalid_argument("CircleDensity: need at least 8 grid values");
  for (double v : values_)
    if (!(v >= 0.0)) throw std::invalid_argument("CircleDensity: values must be nonnegative");
}

CircleDensity CircleDensity::from_function(const std::function<double(double)>& f,
                                           std::size_t grid) {
  std::vector<double> vals(grid);
  for (std::size_t i = 0; i < grid; ++i)
    vals[i] = std::max(0.0, f(kTwoPi * static_cast<double>(i) / static_cast<double>(grid)));
  CircleDensity d(std::move(vals));
  d.generator_ = [f](double th) { return std::max(0.0, f(th)); };
  return d;
}

CircleDensity CircleDensity::constant(double c, std::size_t grid) {
  if (!(c >= 0.0)) throw std::invalid_argument("CircleDensity: constant must be nonnegative");
  return from_function([c](double) { return c; }, grid);
}

CircleDensity CircleDensity::trig(const std::vector<double>& coeffs, std::size_t grid) {
  if (coeffs.empty()) throw std::invalid_argument("CircleDensity: empty coefficient list");
  auto f = [coeffs](double th) {
    double v = coeffs[0];
    for (std::size_t k = 1; 2 * k - 1 < coeffs.size(); ++k) {
      v += coeffs[2 * k - 1] * std::cos(static_cast<double>(k) * th);
      if (2 * k < coeffs.size()) v += coeffs[2 * k] * std::sin(static_cast<double>(k) * th);
    }
    return v;  // clipped at 0 by from_function
  };
  return from_function(f, grid);
}

CircleDensity CircleDensity::ellipse(double p, double q, std::size_t grid) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("CircleDensity: ellipse axes > 0");
  auto f = [p, q](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double r2inv = c * c / (p * p) + s * s / (q * q);
    return std::pow(r2inv, -1.5);  // r_E(th)^3
  };
  return from_function(f, grid);
}

double CircleDensity::eval(double theta) const {
  if (generator_) return (*generator_)(theta);
  const std::size_t n = values_.size();
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  const double pos = t / kTwoPi * static_cast<double>(n);
  const std::size_t i = std::min(n - 1, static_cast<std::size_t>(pos));
  const double frac = pos - static_cast<double>(i);
  return values_[i] * (1.0 - frac) + values_[(i + 1) % n] * frac;
}

CircleDensity CircleDensity::refined(std::size_t factor) const {
  const std::size_t n = values_.size() * factor;
  if (generator_) {
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i)
      vals[i] = (*generator_)(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    CircleDensity d(std::move(vals));
    d.generator_ = generator_;
    return d;
  }
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i)
    vals[i] = eval(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
  return CircleDensity(std::move(vals));
}

bool CircleDensity::is_pi_periodic(double tol) const {
  const std::size_t n = values_.size();
  if (n % 2 != 0) return false;
  for (std::size_t i = 0; i < n / 2; ++i)
    if (std::abs(values_[i] - values_[i + n / 2]) > tol) return false;
  return true;
}

double circle_form(const CircleDensity& f) { return periodic_sin_form(f.values()); }

double circle_form_series(const CircleDensity& f, int modes) {
  const std::vector<double>& v = f.values();
  const std::size_t n = v.size();
  const double h = kTwoPi / static_cast<double>(n);
  double a0 = 0.0;
  for (double x : v) a0 += x;
  a0 *= h;

  double form = (2.0 / kPi) * a0 * a0;
  for (int k = 1; k <= modes; ++k) {
    double ak = 0.0, bk = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double th = h * static_cast<double>(j);
      ak += v[j] * std::cos(2.0 * k * th);
      bk += v[j] * std::sin(2.0 * k * th);
    }
    ak *= h;
    bk *= h;
    form -= (4.0 / kPi) * (ak * ak + bk * bk) / (4.0 * k * k - 1.0);
  }
  return form;
}

double circle_bound(const CircleDensity& f) {
  const std::vector<double>& v = f.values();
  const double h = kTwoPi / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += std::cbrt(x) * std::cbrt(x);  // x^{2/3}, stable at 0
  s *= h;
  return s * s * s / (kPi * kPi);
}

SlackReport circle_check(const CircleDensity& f) {
  const CircleDensity fine = f.refined(2);
  const double form_c = circle_form(f), bound_c = circle_bound(f);
  const double form_f = circle_form(fine), bound_f = circle_bound(fine);
  SlackReport r;
  r.form = form_f;
  r.bound = bound_f;
  r.slack = form_f - bound_f;
  r.quad_error = std::abs(form_f - form_c) + std::abs(bound_f - bound_c);
  return r;
}

CircleDensity pi_periodize(const CircleDensity& f) {
  const std::vector<double>& v = f.values();
  const std::size_t n = v.size();
  if (n % 2 != 0) throw std::invalid_argument("pi_periodize: grid must be even");
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = 0.5 * (v[i] + v[(i + n / 2) % n]);
  return CircleDensity(std::move(vals));
}

// ---------------------------------------------------------------------------
// Line densities
// ---------------------------------------------------------------------------

LineDensity::LineDensity(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (!(hi_ > lo_)) throw std::invalid_argument("LineDensity: empty interval");
  if (values_.size() < 4) throw std::invalid_argument("LineDensity: need at least 4 grid values");
  for (double v : values_)
    if (!(v >= 0.0)) throw std::invalid_argument("LineDensity: values must be nonnegative");
}

TransferReport tangent_transfer(const CircleDensity& f, double truncation, std::size_t nodes) {
  if (!f.is_pi_periodic(1e-9))
    throw std::invalid_argument("tangent_transfer: density must be pi-periodic");
  if (!(truncation > 1.0)) throw std::invalid_argument("tangent_transfer: truncation > 1");
  if (nodes < 1024) throw std::invalid_argument("tangent_transfer: too few nodes");

  const double L = truncation;
  std::vector<double> vals(nodes);
  const double h = 2.0 * L / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = -L + h * static_cast<double>(i);
    const double fu = f.eval(std::atan(u));
    vals[i] = fu / std::pow(1.0 + u * u, 1.5);
  }
  LineDensity q(-L, L, std::move(vals));
  const double c = f.eval(kPi / 2.0);
  q.set_cubic_tail(c);

  TransferReport rep{std::move(q), 0.0};
  // Neglected 2/3-integral mass if the tail were dropped entirely.
  rep.tail_bound = 2.0 * std::pow(c, 2.0 / 3.0) * (kPi / 2.0 - std::atan(L));
  return rep;
}

namespace {

// Tail helpers for q(u) = c (1+u^2)^{-3/2} on |u| > L.
double tail_mass(double c, double L) { return c * (1.0 - L / std::sqrt(1.0 + L * L)); }
double tail_int_tau(double L) { return std::sqrt(1.0 + L * L) - L; }  // int_L^inf tau(x) dx
double tail_int_tau2(double L) {
  // int_L^inf tau(x)^2 dx with tau(x) = 1 - x/sqrt(1+x^2)
  return 2.0 * std::sqrt(1.0 + L * L) - 2.0 * L - (kPi / 2.0 - std::atan(L));
}

}  // namespace

double line_form(const LineDensity& q) {
  const std::vector<double>& v = q.values();
  const std::size_t n = v.size();
  const double h = q.step();
  const double c = q.cubic_tail().value_or(0.0);
  const double L = std::max(std::abs(q.lo()), std::abs(q.hi()));

  const double m_tail = c > 0.0 ? tail_mass(c, L) : 0.0;

  // Running integral Q, seeded with the left tail mass.
  std::vector<double> Q(n);
  Q[0] = m_tail;
  for (std::size_t i = 1; i < n; ++i) Q[i] = Q[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
  const double total = Q[n - 1] + m_tail;

  // Layer cake: int int q q |u-v| = 2 int Q (M - Q).
  double interior = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    interior += w * Q[i] * (total - Q[i]);
  }
  interior *= h;

  double tails = 0.0;
  if (c > 0.0) {
    // On each tail Q(M-Q) = (M - c tau)(c tau) with tau the remaining tail mass.
    tails = 2.0 * (total * c * tail_int_tau(L) - c * c * tail_int_tau2(L));
  }
  return 2.0 * (interior + tails);
}

double line_form_double_sum(const LineDensity& q) {
  const std::vector<double>& v = q.values();
  const std::size_t n = v.size();
  const double h = q.step();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      row += wj * v[j] * std::abs(static_cast<double>(i) - static_cast<double>(j)) * h;
    }
    s += wi * v[i] * row;
  }
  return s * h * h;
}

double line_bound(const LineDensity& q) {
  const std::vector<double>& v = q.values();
  const double h = q.step();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    s += w * std::cbrt(v[i]) * std::cbrt(v[i]);
  }
  s *= h;
  if (const auto c = q.cubic_tail(); c && *c > 0.0) {
    const double L = std::max(std::abs(q.lo()), std::abs(q.hi()));
    s += 2.0 * std::pow(*c, 2.0 / 3.0) * (kPi / 2.0 - std::atan(L));
  }
  return 2.0 * s * s * s / (kPi * kPi);
}

namespace {

LineDensity coarsened(const LineDensity& q) {
  const std::vector<double>& v = q.values();
  std::vector<double> half;
  for (std::size_t i = 0; i < v.size(); i += 2) half.push_back(v[i]);
  const double hi = q.lo() + q.step() * 2.0 * static_cast<double>(half.size() - 1);
  LineDensity out(q.lo(), hi, std::move(half));
  if (const auto c = q.cubic_tail()) out.set_cubic_tail(*c);
  return out;
}

}  // namespace

SlackReport line_check(const LineDensity& q) {
  SlackReport r;
  r.form = line_form(q);
  r.bound = line_bound(q);
  r.slack = r.form - r.bound;
  const LineDensity coarse = coarsened(q);
  r.quad_error =
      std::abs(r.form - line_form(coarse)) + std::abs(r.bound - line_bound(coarse));
  return r;
}

CircleDensity parse_circle_density(const std::string& spec, std::size_t grid) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("circle density spec: missing ':' in " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  auto parse_list = [&]() {
    std::vector<double> out;
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
  };

  if (kind == "const") {
    const auto v = parse_list();
    if (v.size() != 1) throw std::invalid_argument("circle density spec: const:c");
    return CircleDensity::constant(v[0], grid);
  }
  if (kind == "trig") return CircleDensity::trig(parse_list(), grid);
  if (kind == "ellipse") {
    const auto v = parse_list();
    if (v.size() != 2) throw std::invalid_argument("circle density spec: ellipse:p,q");
    return CircleDensity::ellipse(v[0], v[1], grid);
  }
  if (kind == "grid") {
    std::ifstream in(body);
    if (!in) throw std::invalid_argument("circle density spec: cannot open " + body);
    std::vector<double> vals;
    double x;
    while (in >> x) vals.push_back(x);
    return CircleDensity(std::move(vals));
  }
  throw std::invalid_argument("circle density spec: unknown kind " + kind);
}

}  // namespace crosslab

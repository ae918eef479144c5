#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crosslab {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    const double pi = 3.14159265358979323846;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
      weights[n - 1 - i] = weights[i];
    }
  }
};

inline const GaussLegendre& gl15() {
  static const GaussLegendre rule(15);
  return rule;
}

template <class Fn>
double gl_panel(const Fn& f, double a, double b) {
  const GaussLegendre& g = gl15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
  return s * half;
}

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  bool converged = true;
  int panels = 0;
};

/// Adaptive Gauss-Legendre: each panel's 15-point estimate is compared with
/// the sum over its two halves; panels failing the tolerance are split.
/// Tolerance is relative with an absolute floor.
template <class Fn>
QuadResult integrate_adaptive(const Fn& f, double a, double b, double rel_tol,
                              double abs_floor = 1e-14, int max_panels = 20000) {
  QuadResult out;
  if (a == b) return out;

  struct Interval {
    double a, b, coarse;
  };
  std::vector<Interval> stack;
  stack.push_back({a, b, gl_panel(f, a, b)});

  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (iv.a + iv.b);
    const double left = gl_panel(f, iv.a, mid);
    const double right = gl_panel(f, mid, iv.b);
    const double fine = left + right;
    const double err = std::abs(fine - iv.coarse);
    ++out.panels;

    // Local acceptance: relative to this panel's own contribution, with an
    // absolute floor so jump discontinuities terminate.
    if (err <= rel_tol * std::abs(fine) + abs_floor || out.panels >= max_panels) {
      out.value += fine;
      out.abs_error += err;
      if (out.panels >= max_panels && err > rel_tol * std::abs(fine) + abs_floor)
        out.converged = false;
    } else {
      stack.push_back({iv.a, mid, left});
      stack.push_back({mid, iv.b, right});
    }
  }
  return out;
}

/// Adaptive integration over [a, b] pre-split into panels no wider than
/// `split`, so features narrower than the panel spacing of a single rule
/// (kernel bumps, localized supports) cannot be skipped.
template <class Fn>
QuadResult integrate_adaptive_presplit(const Fn& f, double a, double b, double split,
                                       double rel_tol, double abs_floor = 1e-14) {
  QuadResult out;
  if (!(b > a)) return out;
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / split)));
  const double h = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const QuadResult piece =
        integrate_adaptive(f, a + k * h, a + (k + 1) * h, rel_tol, abs_floor, 4000);
    out.value += piece.value;
    out.abs_error += piece.abs_error;
    out.panels += piece.panels;
    out.converged = out.converged && piece.converged;
  }
  return out;
}

/// Two-dimensional helper: outer adaptive rule over [a, b], inner adaptive
/// rule over [lo(x), hi(x)]. Inner tolerance is tightened by one order.
/// `split` bounds the pre-split panel width on both axes (0 disables).
template <class Fn, class Lo, class Hi>
QuadResult integrate_adaptive_2d(const Fn& f, double a, double b, const Lo& lo, const Hi& hi,
                                 double rel_tol, double split = 0.0) {
  bool inner_ok = true;
  auto outer = [&](double x) {
    const double l = lo(x), h = hi(x);
    if (!(h > l)) return 0.0;
    QuadResult inner =
        split > 0.0
            ? integrate_adaptive_presplit([&](double y) { return f(x, y); }, l, h, split,
                                          0.1 * rel_tol, 1e-15)
            : integrate_adaptive([&](double y) { return f(x, y); }, l, h, 0.1 * rel_tol, 1e-15,
                                 4000);
    if (!inner.converged) inner_ok = false;
    return inner.value;
  };
  QuadResult res = split > 0.0 ? integrate_adaptive_presplit(outer, a, b, split, rel_tol)
                               : integrate_adaptive(outer, a, b, rel_tol);
  res.converged = res.converged && inner_ok;
  return res;
}

}  // namespace crosslab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "crosslab/busemann.hpp"
#include "crosslab/rng.hpp"

using namespace crosslab;

namespace {
constexpr double kPi = 3.14159265358979323846;

CircleDensity random_clipped_trig(std::uint64_t seed, std::uint64_t index, std::size_t grid = 512) {
  SubStream st(seed, index);
  const int degree = 1 + static_cast<int>(st.uniform() * 4);
  std::vector<double> coeffs;
  coeffs.push_back(0.5 + st.uniform());  // keep some positive mass
  for (int k = 1; k <= degree; ++k) {
    coeffs.push_back(st.normal() / (k + 1));
    coeffs.push_back(st.normal() / (k + 1));
  }
  return CircleDensity::trig(coeffs, grid);
}

}  // namespace

TEST_CASE("circle form equals 8 pi for the constant density") {
  CHECK(circle_form(CircleDensity::constant(1.0, 2048)) ==
        doctest::Approx(8 * kPi).epsilon(1e-12));
  // bilinearity: f = c scales the form by c^2
  CHECK(circle_form(CircleDensity::constant(1.7, 1024)) ==
        doctest::Approx(1.7 * 1.7 * 8 * kPi).epsilon(1e-10));
}

TEST_CASE("circle form is stable across grids") {
  const CircleDensity f512 = CircleDensity::trig({1.0, 0.0, 0.0, 1.0}, 512);  // 1 + cos(2 th)
  const CircleDensity f2048 = CircleDensity::trig({1.0, 0.0, 0.0, 1.0}, 2048);
  CHECK(std::abs(circle_form(f512) - circle_form(f2048)) < 1e-8);
}

TEST_CASE("cosine-series cross-check of the quadratic form") {
  // 1 + cos(2 th): B = (2/pi)(2 pi)^2 - (4/pi) pi^2 / 3 = 8 pi - 4 pi/3
  const CircleDensity f = CircleDensity::trig({1.0, 0.0, 0.0, 1.0}, 2048);
  const double expected = 8 * kPi - 4 * kPi / 3.0;
  CHECK(circle_form(f) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(circle_form_series(f, 64) == doctest::Approx(expected).epsilon(1e-9));

  for (int i = 0; i < 20; ++i) {
    const CircleDensity g = random_clipped_trig(1001, i, 1024);
    CHECK(circle_form_series(g, 512) == doctest::Approx(circle_form(g)).epsilon(1e-4));
  }
}

TEST_CASE("circle bound basics") {
  CHECK(circle_bound(CircleDensity::constant(1.0, 1024)) ==
        doctest::Approx(8 * kPi).epsilon(1e-12));
  CHECK(circle_bound(CircleDensity::constant(0.0, 1024)) == 0.0);
  // homogeneity: bound scales as c^2
  const CircleDensity f = random_clipped_trig(1003, 0, 1024);
  std::vector<double> scaled = f.values();
  for (double& v : scaled) v *= 2.25;
  CHECK(circle_bound(CircleDensity(scaled)) ==
        doctest::Approx(2.25 * 2.25 * circle_bound(f)).epsilon(1e-12));
}

TEST_CASE("equality cases of the circle inequality") {
  const SlackReport one = circle_check(CircleDensity::constant(1.0, 2048));
  CHECK(std::abs(one.slack) < 1e-9);

  const SlackReport ell = circle_check(CircleDensity::ellipse(1.0, 2.0, 2048));
  CHECK(std::abs(ell.slack) <= 1e-6 * ell.form);

  const SlackReport circle = circle_check(CircleDensity::ellipse(0.8, 0.8, 1024));
  CHECK(std::abs(circle.slack) <= 1e-6 * circle.form);
}

TEST_CASE("nonnegative slack on random clipped trig polynomials") {
  for (int i = 0; i < 100; ++i) {
    const SlackReport r = circle_check(random_clipped_trig(1005, i));
    CHECK(r.slack >= -1e-8);
  }
}

TEST_CASE("pi periodization") {
  // pi-periodic density is a fixed point
  const CircleDensity f = CircleDensity::trig({1.0, 0.0, 0.0, 0.5}, 512);  // 1 + 0.5 cos 2th
  const CircleDensity fbar = pi_periodize(f);
  for (std::size_t i = 0; i < f.grid(); ++i)
    CHECK(fbar.values()[i] == doctest::Approx(f.values()[i]).epsilon(1e-12));

  // indicator of [0, pi) averages to 1/2
  std::vector<double> ind(512, 0.0);
  for (std::size_t i = 0; i < 256; ++i) ind[i] = 1.0;
  const CircleDensity half = pi_periodize(CircleDensity(ind));
  for (double v : half.values()) CHECK(v == 0.5);

  // invariances: B unchanged, 2/3-integral does not decrease
  for (int i = 0; i < 25; ++i) {
    const CircleDensity g = random_clipped_trig(1007, i, 1024);
    const CircleDensity gbar = pi_periodize(g);
    CHECK(circle_form(gbar) == doctest::Approx(circle_form(g)).epsilon(1e-9));
    const double before = std::cbrt(circle_bound(g));
    const double after = std::cbrt(circle_bound(gbar));
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("tangent transfer of the constant density") {
  const CircleDensity f = CircleDensity::constant(1.0, 1024);
  const TransferReport tr = tangent_transfer(f, 1000.0, (1 << 22) + 1);
  // q(u) = (1+u^2)^{-3/2}
  const auto& q = tr.q;
  const double h = q.step();
  for (int k = 0; k < 5; ++k) {
    const double u = q.lo() + h * (k * 1000 + 37);
    CHECK(q.values()[static_cast<std::size_t>(k * 1000 + 37)] ==
          doctest::Approx(std::pow(1 + u * u, -1.5)).epsilon(1e-12));
  }
  CHECK(*q.cubic_tail() == doctest::Approx(1.0));

  // int q^{2/3} = pi, so the line bound is (2/pi^2) pi^3 = 2 pi
  CHECK(line_bound(q) == doctest::Approx(2 * kPi).epsilon(1e-7));
  // and the form is 2 pi as well (equality case)
  CHECK(line_form(q) == doctest::Approx(2 * kPi).epsilon(1e-7));

  // transfer identities: B(f,f) = 4 line_form, circle bound = 4 line bound
  CHECK(4 * line_form(q) == doctest::Approx(circle_form(f)).epsilon(1e-7));
  CHECK(4 * line_bound(q) == doctest::Approx(circle_bound(f)).epsilon(1e-7));

  CHECK_THROWS(tangent_transfer(CircleDensity::trig({1, 1, 0}, 512)));  // not pi-periodic
}

TEST_CASE("tangent transfer of the ellipse witness keeps equality") {
  const CircleDensity f = CircleDensity::ellipse(1.0, 2.0, 2048);
  const TransferReport tr = tangent_transfer(f);
  const SlackReport line = line_check(tr.q);
  CHECK(std::abs(line.slack) <= 1e-6 * line.form);
  CHECK(4 * line.form == doctest::Approx(circle_form(f)).epsilon(1e-6));
}

TEST_CASE("line form closed cases") {
  // q = 1 on [0,1]: form 1/3, bound 2/pi^2
  std::vector<double> ones(4097, 1.0);
  const LineDensity q(0.0, 1.0, ones);
  CHECK(line_form(q) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(line_bound(q) == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-12));
  const SlackReport r = line_check(q);
  CHECK(r.slack == doctest::Approx(1.0 / 3.0 - 2.0 / (kPi * kPi)).epsilon(1e-4));
  CHECK(r.slack > 0.0);

  // zero density
  std::vector<double> zeros(64, 0.0);
  const LineDensity z(-1.0, 1.0, zeros);
  CHECK(line_form(z) == 0.0);
  CHECK(line_bound(z) == 0.0);
}

TEST_CASE("prefix-sum line form matches the double-sum oracle on small grids") {
  for (int i = 0; i < 50; ++i) {
    SubStream st(1011, i);
    const std::size_t n = 64 + static_cast<std::size_t>(st.uniform() * 192);
    std::vector<double> vals(n);
    for (double& v : vals) v = std::abs(st.normal());
    const double lo = -1.0 - st.uniform();
    const double hi = 0.5 + st.uniform();
    const LineDensity q(lo, hi, vals);
    const double fast = line_form(q);
    const double slow = line_form_double_sum(q);
    // both are O(h^2) quadratures of the same integral
    const double h = q.step();
    CHECK(std::abs(fast - slow) < 20.0 * h * h * (hi - lo) + 1e-12);
  }
}

TEST_CASE("nonnegative slack on random line densities") {
  for (int i = 0; i < 200; ++i) {
    SubStream st(1013, i);
    const std::size_t n = 257;
    std::vector<double> vals(n);
    for (double& v : vals) v = std::abs(st.normal()) + 0.01;
    const LineDensity q(-2.0 + st.uniform(), 1.0 + st.uniform(), vals);
    const SlackReport r = line_check(q);
    CHECK(r.slack >= -std::max(1e-8, r.quad_error));
  }
}

TEST_CASE("homogeneity of the line inequality") {
  SubStream st(1017, 0);
  std::vector<double> vals(513);
  for (double& v : vals) v = std::abs(st.normal());
  const LineDensity q(-1.0, 1.0, vals);
  std::vector<double> scaled = vals;
  for (double& v : scaled) v *= 3.0;
  const LineDensity q3(-1.0, 1.0, scaled);
  CHECK(line_form(q3) == doctest::Approx(9.0 * line_form(q)).epsilon(1e-12));
  CHECK(line_bound(q3) == doctest::Approx(9.0 * line_bound(q)).epsilon(1e-12));
}

TEST_CASE("circle density grammar") {
  CHECK(circle_form(parse_circle_density("const:1", 1024)) ==
        doctest::Approx(8 * kPi).epsilon(1e-10));
  CHECK(parse_circle_density("ellipse:1,2", 512).grid() == 512);
  CHECK(parse_circle_density("trig:1,0.2,0.1", 512).grid() == 512);

  const std::string path = "test_circle_density.txt";
  {
    std::ofstream out(path);
    for (int i = 0; i < 256; ++i) out << 1.0 + 0.1 * std::sin(2 * kPi * i / 256.0) << "\n";
  }
  const CircleDensity g = parse_circle_density("grid:" + path, 0);
  CHECK(g.grid() == 256);
  std::remove(path.c_str());

  CHECK_THROWS(parse_circle_density("nope:1", 512));
  CHECK_THROWS(parse_circle_density("grid:/does/not/exist", 512));
}

TEST_CASE("input validation") {
  CHECK_THROWS(CircleDensity(std::vector<double>{1, 2}));
  CHECK_THROWS(CircleDensity(std::vector<double>(16, -1.0)));
  CHECK_THROWS(LineDensity(0.0, 0.0, std::vector<double>(8, 1.0)));
  CHECK_THROWS(periodic_sin_form(std::vector<double>(15, 1.0)));  // odd grid
}

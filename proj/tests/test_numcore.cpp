#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "freeconv/contour.hpp"
#include "freeconv/newton.hpp"
#include "freeconv/quadrature.hpp"
#include "freeconv/trace.hpp"

using namespace freeconv;

namespace {

Contour rectangle(Complex lo, Complex hi) {
  Complex a = lo, b{hi.real(), lo.imag()}, c = hi, d{lo.real(), hi.imag()};
  return Contour({Segment{a, b}, Segment{b, c}, Segment{c, d}, Segment{d, a}});
}

}  // namespace

TEST_CASE("residue of a simple pole on the unit circle") {
  auto f = [](Complex z) { return 1.0 / z; };
  Complex v = integrate_contour(f, Contour::circle({0, 0}, 1.0));
  CHECK(std::abs(v - 2.0 * kPi * kI) < 1e-10);
}

TEST_CASE("entire integrand over closed paths vanishes") {
  auto f = [](Complex z) { return z; };
  CHECK(std::abs(integrate_contour(f, Contour::circle({0.3, -0.2}, 2.0))) < 1e-10);
  CHECK(std::abs(integrate_contour(f, rectangle({-1, -1}, {2, 0.5}))) < 1e-10);
}

TEST_CASE("two enclosed simple poles") {
  // 2z/(z^2-4) = 1/(z-2) + 1/(z+2), both poles inside |z| = 3
  auto f = [](Complex z) { return 2.0 * z / (z * z - 4.0); };
  Complex v = integrate_contour(f, Contour::circle({0, 0}, 3.0));
  CHECK(std::abs(v - 4.0 * kPi * kI) < 1e-8);
}

TEST_CASE("closed-contour quadrature of random polynomials stays below tolerance") {
  std::mt19937_64 eng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QuadratureConfig cfg;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Complex> coef;
    int deg = 1 + rep % 6;
    for (int k = 0; k <= deg; ++k) coef.push_back({u(eng), u(eng)});
    auto f = [&](Complex z) {
      Complex acc{0, 0}, p{1, 0};
      for (const auto& c : coef) {
        acc += c * p;
        p *= z;
      }
      return acc;
    };
    Contour path = rep % 2 ? Contour::circle({u(eng), u(eng)}, 0.5 + std::abs(u(eng)))
                           : rectangle({-1.5 + 0.1 * rep, -1.0}, {1.0, 0.7});
    CHECK(std::abs(integrate_contour(f, path, cfg)) <= cfg.abs_tol);
  }
}

TEST_CASE("reversing a path negates the integral") {
  auto f = [](Complex z) { return std::exp(z) / (z - Complex{0.2, 0.1}); };
  QuadratureConfig cfg;
  Contour path({Segment{{-2, -1}, {1, -1}}, Arc{{1, 0}, 1.0, -kPi / 2, kPi / 2}});
  Complex fwd = integrate_contour(f, path, cfg);
  Complex bwd = integrate_contour(f, path.reversed(), cfg);
  CHECK(std::abs(fwd + bwd) <= 2.0 * cfg.abs_tol);
}

TEST_CASE("refinement failure carries the last estimate") {
  // near-singular integrand with an absurdly tight budget
  auto f = [](Complex z) { return 1.0 / (z - Complex{1.0, 1e-7}); };
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-14;
  cfg.max_refinements = 3;
  Contour path({Segment{{0, 0}, {2, 0}}});
  CHECK_THROWS_AS(integrate_contour(f, path, cfg), RefinementFailure);
}

TEST_CASE("newton finds the real quadratic root") {
  auto f = [](Complex w) { return w * w - 1.0; };
  auto fp = [](Complex w) { return 2.0 * w; };
  Complex w = newton_solve(f, fp, {0.7, 0.0}, 1e-12, 50);
  CHECK(std::abs(w - 1.0) < 1e-12);
}

TEST_CASE("newton locates the derivative zero of the rescaled transform") {
  // psi'(z) for lambda = 0.25 vanishes exactly at -1 and 1
  const double lam = 0.25, s = std::sqrt(lam), c = (1 - lam) * (1 - lam) * s;
  auto f = [&](Complex z) {
    Complex d1 = s * z + 1.0, d2 = z + s;
    return c * (1.0 - z * z) / (d1 * d1 * d2 * d2);
  };
  auto fp = [&](Complex z) {
    Complex h{1e-7, 0};
    return (f(z + h) - f(z - h)) / (2.0 * h);
  };
  Complex w = newton_solve(f, fp, {-0.9, 0.0}, 1e-10, 80);
  CHECK(std::abs(w - Complex{-1.0, 0.0}) < 1e-8);
  CHECK(std::abs(f(w)) <= 1e-10);
}

TEST_CASE("newton inverts the free Poisson K-transform") {
  const double lam = 1.0;
  Complex target{0.0, 5.0};
  auto f = [&](Complex w) { return 1.0 / w + lam / (1.0 - w) - target; };
  auto fp = [&](Complex w) { return -1.0 / (w * w) + lam / ((1.0 - w) * (1.0 - w)); };
  Complex w = newton_solve(f, fp, 1.0 / target, 1e-12, 60);
  CHECK(std::abs(f(w)) <= 1e-12);
  CHECK(std::abs(1.0 / w + lam / (1.0 - w) - target) < 1e-10);
  CHECK(std::abs(w * target - 1.0) < 0.5);  // stays on the 1/z-asymptote branch
}

TEST_CASE("newton reports divergence with an iterate trace") {
  auto f = [](Complex w) { return std::exp(w) + 1e3; };  // no root anywhere useful
  auto fp = [](Complex w) { return std::exp(w); };
  try {
    newton_solve(f, fp, {0.0, 0.0}, 1e-12, 10);
    FAIL("expected NoRootError");
  } catch (const NoRootError& e) {
    CHECK(e.iterates.size() >= 1);
  }
}

TEST_CASE("tracer follows a straight level line of Re z^2") {
  // Re z^2 = x^2 - y^2 vanishes on the diagonals
  auto field = [](Complex z) { return z.real() * z.real() - z.imag() * z.imag(); };
  Complex start = Complex{1.0, 1.0} / std::sqrt(2.0);
  TraceConfig cfg;
  cfg.step = 1e-2;
  auto curve = trace_level_curve(field, start, {1.0, 1.0},
                                 [](Complex z) { return std::abs(z) > 2.0; }, cfg);
  REQUIRE(curve.points.size() > 10);
  for (const auto& z : curve.points) CHECK(std::abs(z.real() - z.imag()) < 1e-8);
}

TEST_CASE("tracer keeps the unit-circle level set of Im psi") {
  const double lam = 0.25, s = std::sqrt(lam);
  auto field = [&](Complex z) {
    Complex v = z * (1 - lam) * (1 - lam) / ((s * z + 1.0) * (z + s));
    return v.imag();
  };
  TraceConfig cfg;
  cfg.step = 5e-3;
  Complex start{0.0, -1.0};  // on the circle
  auto curve = trace_level_curve(field, start, {1.0, 0.0},
                                 [](Complex z) { return z.real() > 0.93; }, cfg);
  REQUIRE(curve.points.size() > 50);
  for (const auto& z : curve.points) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-6);
}

TEST_CASE("traced points re-evaluate inside the field tolerance") {
  const double lam = 0.5, s = std::sqrt(lam);
  const double a = s / (1 - lam), b = 1.0 / (1 - lam);
  auto field = [&](Complex z) {
    Complex w = a * z + b;
    Complex k = 1.0 / w + lam / (1.0 - w) + 0.001 / ((w - 2.0) * (w - 2.0));
    return k.imag();
  };
  // start on the level set near the bottom of the unit circle, found by a
  // short vertical search
  double ylo = -1.1, yhi = -0.9;  // field > 0 at ylo, < 0 at yhi
  for (int i = 0; i < 60; ++i) {
    double ym = 0.5 * (ylo + yhi);
    (field({0.0, ym}) > 0 ? ylo : yhi) = ym;
  }
  Complex start{0.0, 0.5 * (ylo + yhi)};
  TraceConfig cfg;
  cfg.step = 5e-3;
  auto curve = trace_level_curve(field, start, {1.0, 0.0},
                                 [](Complex z) { return z.real() > 0.9; }, cfg);
  REQUIRE(curve.points.size() > 20);
  for (size_t i = 1; i + 1 < curve.points.size(); ++i)
    CHECK(std::abs(field(curve.points[i])) <= 1e-8);
  // spacing invariant
  for (size_t i = 1; i < curve.points.size(); ++i)
    CHECK(std::abs(curve.points[i] - curve.points[i - 1]) <= 2.0 * cfg.step);
}

TEST_CASE("mismatched contour pieces are rejected") {
  CHECK_THROWS_AS(Contour({Segment{{0, 0}, {1, 0}}, Segment{{1.1, 0}, {2, 0}}}),
                  InvalidConfigError);
}

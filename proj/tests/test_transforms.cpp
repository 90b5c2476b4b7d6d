#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "freeconv/build.hpp"
#include "freeconv/cumulants.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/measure.hpp"
#include "freeconv/mp.hpp"
#include "freeconv/rexpr.hpp"

using namespace freeconv;

namespace {

// brute-force oracle: sum over non-crossing partitions of [n] of products of
// block cumulants; independent of the convolution-power recursion
bool is_non_crossing(const std::vector<int>& block_of) {
  int n = block_of.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d)
          if (block_of[a] == block_of[c] && block_of[b] == block_of[d] &&
              block_of[a] != block_of[b])
            return false;
  return true;
}

double nc_moment_bruteforce(const CumulantSeq& kappa, int n) {
  // enumerate set partitions via restricted-growth strings
  std::vector<int> rg(n, 0);
  double total = 0.0;
  while (true) {
    if (is_non_crossing(rg)) {
      int blocks = *std::max_element(rg.begin(), rg.end()) + 1;
      std::vector<int> size(blocks, 0);
      for (int v : rg) size[v]++;
      double prod = 1.0;
      for (int b = 0; b < blocks; ++b)
        prod *= size[b] <= static_cast<int>(kappa.size()) ? kappa[size[b] - 1] : 0.0;
      total += prod;
    }
    // next restricted-growth string
    int i = n - 1;
    for (; i > 0; --i) {
      int cap = *std::max_element(rg.begin(), rg.begin() + i) + 1;
      if (rg[i] < cap) {
        rg[i]++;
        std::fill(rg.begin() + i + 1, rg.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return total;
}

std::mt19937_64 rng(987654321);

Complex random_z(double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("R evaluation matches hand values") {
  CHECK(std::abs(RExpr::free_poisson(2.0).eval({0.5, 0}) - Complex{4.0, 0}) < 1e-14);
  CHECK(std::abs(RExpr::translate(3.5).eval(random_z()) - Complex{3.5, 0}) < 1e-14);
  RExpr sum = free_convolve(RExpr::free_poisson(0.5), RExpr::rational_pert(0.01, 2.0, 2));
  CHECK(std::abs(sum.eval({0, 0}) - Complex{0.5025, 0}) < 1e-14);
}

TEST_CASE("pole evaluation is rejected") {
  CHECK_THROWS_AS(RExpr::free_poisson(1.0).eval({1.0, 0.0}), PoleError);
  CHECK_THROWS_AS(RExpr::rational_pert(0.1, 2.0, 2).eval({2.0, 0.0}), PoleError);
}

TEST_CASE("K evaluation and derivatives") {
  RExpr none = RExpr::zero();
  CHECK(std::abs(eval_k(none, {0, 2}) - Complex{0, -0.5}) < 1e-14);
  RExpr fp1 = RExpr::free_poisson(1.0);
  CHECK(std::abs(eval_k(fp1, {-1, 0}) - Complex{-0.5, 0}) < 1e-14);
  RExpr fpq = RExpr::free_poisson(0.25);
  CHECK(std::abs(eval_k_prime(fpq, {-1, 0}) - Complex{-0.9375, 0}) < 1e-14);
  CHECK_THROWS_AS(eval_k(fp1, {0, 0}), PoleError);
}

TEST_CASE("conjugate symmetry of R expressions") {
  RExpr e = free_convolve(free_convolve(RExpr::free_poisson(0.7), RExpr::translate(-0.3)),
                          RExpr::rational_pert(0.05, 2.0, 2, 0.5));
  for (int i = 0; i < 1000; ++i) {
    Complex z = random_z();
    if (e.min_pole_distance(z) < 0.1) continue;
    CHECK(std::abs(e.eval(std::conj(z)) - std::conj(e.eval(z))) <= 1e-12);
  }
}

TEST_CASE("inversion reproduces the closed-form Cauchy transform") {
  InversionConfig cfg;
  SUBCASE("point mass at zero") {
    Complex w = invert_k(RExpr::zero(), {0, 2}, cfg);
    CHECK(std::abs(w - Complex{0, -0.5}) < 1e-12);
  }
  SUBCASE("free Poisson, generic point") {
    RExpr e = RExpr::free_poisson(1.0);
    Complex z{2, 2};
    Complex w = invert_k(e, z, cfg);
    CHECK(std::abs(w - mp_cauchy(1.0, z)) < 1e-10);
  }
  SUBCASE("just above the bulk") {
    RExpr e = RExpr::free_poisson(0.25);
    Complex z{0.5, 0.001};
    Complex w = invert_k(e, z, cfg);
    CHECK(w.imag() < -0.5);
    CHECK(std::abs(w - mp_cauchy(0.25, z)) < 1e-9);
  }
}

TEST_CASE("Cauchy transform maps the upper half plane into the lower") {
  std::vector<RExpr> exprs = {RExpr::free_poisson(0.25), RExpr::free_poisson(1.0),
                              RExpr::free_poisson(4.0),
                              free_convolve(RExpr::free_poisson(0.5),
                                            RExpr::rational_pert(1e-3, 2.0, 2))};
  InversionConfig cfg;
  std::uniform_real_distribution<double> ux(-6.0, 10.0), uy(0.01, 8.0);
  for (const auto& e : exprs) {
    for (int i = 0; i < 250; ++i) {
      Complex z{ux(rng), uy(rng)};
      CHECK(invert_k(e, z, cfg).imag() < 0.0);
    }
  }
}

TEST_CASE("z G(z) tends to one") {
  for (double lam : {0.25, 1.0, 4.0}) {
    RExpr e = RExpr::free_poisson(lam);
    InversionConfig cfg;
    double prev = 1e30;
    for (double r : {1e2, 1e3, 1e4}) {
      Complex z = r * std::polar(1.0, 1.0);  // a ray in the upper half plane
      double err = std::abs(z * invert_k(e, z, cfg) - 1.0);
      CHECK(err < prev * 0.2);
      CHECK(err <= 2.0 * std::max(lam, 1.0) / r);
      prev = err;
    }
  }
}

TEST_CASE("density pipeline matches the closed form away from the edges") {
  for (double lam : {0.25, 1.0, 4.0}) {
    RExpr e = RExpr::free_poisson(lam);
    InversionConfig cfg = InversionConfig::accurate();
    double lo, hi;
    mp_support(lam, &lo, &hi);
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      double x = (lo + 0.05) + (hi - lo - 0.1) * i / 40.0;
      worst = std::max(worst, std::abs(stieltjes_density(e, x, cfg) - mp_density(lam, x)));
    }
    INFO("lambda = ", lam, " worst = ", worst);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("density vanishes off the support") {
  InversionConfig cfg;
  CHECK(std::abs(stieltjes_density(RExpr::free_poisson(4.0), 0.5, cfg)) <= 1e-8);
  for (double x : {-1.5, -0.7, 0.6, 1.4}) {
    CHECK(std::abs(stieltjes_density(RExpr::zero(), x, cfg)) <= 1e-8);
  }
}

TEST_CASE("atom extraction") {
  InversionConfig cfg;
  CHECK(extract_atom(RExpr::zero(), 0.0, cfg) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(extract_atom(RExpr::free_poisson(0.25), 0.0, cfg) - 0.75) < 1e-4);
  CHECK(extract_atom(RExpr::free_poisson(2.0), 0.0, cfg) == 0.0);
}

TEST_CASE("closed-form Marchenko-Pastur measures") {
  SUBCASE("lambda 1: support [0,4], no atom") {
    auto m = mp_closed_form(1.0);
    CHECK(m.atoms.empty());
    CHECK(m.support_lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.support_hi == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(m.total_mass() - 1.0) <= 1e-6);
  }
  SUBCASE("lambda 4: support [1,9], mean 4") {
    auto m = mp_closed_form(4.0);
    CHECK(m.support_lo == doctest::Approx(1.0));
    CHECK(m.support_hi == doctest::Approx(9.0));
    CHECK(std::abs(m.moment(1) - 4.0) < 1e-4);
  }
  SUBCASE("lambda 0.25: atom 0.75 plus continuous 0.25") {
    auto m = mp_closed_form(0.25);
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].mass == doctest::Approx(0.75));
    CHECK(std::abs(m.continuous_mass() - 0.25) < 1e-6);
  }
}

TEST_CASE("measure moments") {
  SUBCASE("point mass at 3") {
    SpectralMeasure d3;
    d3.atoms = {{3.0, 1.0}};
    d3.support_lo = d3.support_hi = 3.0;
    auto ms = measure_moments(d3, 4);
    CHECK(ms[0] == doctest::Approx(3.0));
    CHECK(ms[3] == doctest::Approx(81.0));
  }
  SUBCASE("free Poisson moments are Catalan-weighted") {
    auto ms = measure_moments(mp_closed_form(1.0), 4);
    CHECK(std::abs(ms[0] - 1.0) < 1e-4);
    CHECK(std::abs(ms[1] - 2.0) < 1e-4);
    CHECK(std::abs(ms[2] - 5.0) < 1e-4);
    CHECK(std::abs(ms[3] - 14.0) < 1e-4);
  }
  SUBCASE("mean equals the rate") {
    CHECK(std::abs(measure_moments(mp_closed_form(0.25), 1)[0] - 0.25) < 1e-5);
  }
  SUBCASE("growth-control precondition") {
    CHECK_THROWS_AS(measure_moments(mp_closed_form(1.0), 13), InvalidConfigError);
  }
}

TEST_CASE("cumulant-to-moment recursion against non-crossing enumeration") {
  SUBCASE("single cumulant: point mass") {
    CumulantSeq k{2.5, 0, 0, 0, 0, 0};
    auto ms = cumulants_to_moments(k);
    for (int n = 1; n <= 6; ++n) CHECK(ms[n - 1] == doctest::Approx(std::pow(2.5, n)));
  }
  SUBCASE("semicircular cumulants: pair partitions") {
    CumulantSeq k{0, 1, 0, 0};
    auto ms = cumulants_to_moments(k);
    CHECK(ms[0] == doctest::Approx(0.0));
    CHECK(ms[1] == doctest::Approx(1.0));
    CHECK(ms[2] == doctest::Approx(0.0));
    CHECK(ms[3] == doctest::Approx(2.0));
  }
  SUBCASE("all-ones cumulants: Catalan numbers") {
    CumulantSeq k{1, 1, 1, 1};
    auto ms = cumulants_to_moments(k);
    CHECK(ms[0] == doctest::Approx(1.0));
    CHECK(ms[1] == doctest::Approx(2.0));
    CHECK(ms[2] == doctest::Approx(5.0));
    CHECK(ms[3] == doctest::Approx(14.0));
  }
  SUBCASE("random cumulants match brute force") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
      CumulantSeq k;
      for (int i = 0; i < 7; ++i) k.push_back(u(rng));
      auto ms = cumulants_to_moments(k);
      for (int n = 1; n <= 7; ++n)
        CHECK(ms[n - 1] == doctest::Approx(nc_moment_bruteforce(k, n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("cumulants from Cauchy coefficients") {
  SUBCASE("free Poisson cumulants are constant") {
    auto k = r_taylor_coefficients(RExpr::free_poisson(0.7), 8);
    for (double v : k) CHECK(std::abs(v - 0.7) <= 1e-10);
  }
  SUBCASE("translate shifts only the first cumulant") {
    auto k = r_taylor_coefficients(RExpr::translate(1.5), 6);
    CHECK(std::abs(k[0] - 1.5) <= 1e-12);
    for (size_t i = 1; i < k.size(); ++i) CHECK(std::abs(k[i]) <= 1e-12);
  }
  SUBCASE("second-order rational perturbation") {
    double eps = 0.02, c = 2.0;
    auto k = r_taylor_coefficients(RExpr::rational_pert(eps, c, 2), 8);
    for (int m = 1; m <= 8; ++m)
      CHECK(std::abs(k[m - 1] - eps * m / std::pow(c, m + 1)) <= 1e-10);
  }
}

TEST_CASE("free convolution is additive on rates") {
  RExpr conv = free_convolve(RExpr::free_poisson(0.3), RExpr::free_poisson(0.7));
  CHECK(conv == RExpr::free_poisson(1.0));
  InversionConfig cfg;
  double worst = 0.0;
  for (int i = 0; i <= 30; ++i) {
    double x = 0.1 + 3.8 * i / 30.0;
    worst = std::max(worst, std::abs(stieltjes_density(conv, x, cfg) - mp_density(1.0, x)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("translates convolve to a shifted point mass") {
  RExpr conv = free_convolve(RExpr::translate(1.25), RExpr::translate(-0.5));
  auto m = build_measure(conv);
  REQUIRE(m.atoms.size() == 1);
  CHECK(m.atoms[0].x == doctest::Approx(0.75));
  CHECK(m.atoms[0].mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.grid.empty());
}

TEST_CASE("pipeline-built measures validate and match the closed form") {
  for (double lam : {0.25, 1.0, 4.0}) {
    auto m = build_measure(RExpr::free_poisson(lam));
    double lo, hi;
    mp_support(lam, &lo, &hi);
    CHECK(std::abs(m.support_lo - lo) < 1e-6);
    CHECK(std::abs(m.support_hi - hi) < 1e-6);
    CHECK(std::abs(m.total_mass() - 1.0) <= 1e-6);
    if (lam < 1) {
      REQUIRE(m.atoms.size() == 1);
      CHECK(std::abs(m.atoms[0].mass - (1.0 - lam)) < 1e-4);
    } else {
      CHECK(m.atoms.empty());
    }
  }
}

TEST_CASE("moment consistency between grid and cumulant routes") {
  for (double lam : {0.5, 1.0}) {
    auto m = build_measure(RExpr::free_poisson(lam));
    auto via_grid = measure_moments(m, 8);
    auto via_kappa = cumulants_to_moments(r_taylor_coefficients(RExpr::free_poisson(lam), 8));
    for (int n = 0; n < 8; ++n) {
      CHECK(std::abs(via_grid[n] - via_kappa[n]) <=
            1e-4 * std::max(1.0, std::abs(via_kappa[n])));
    }
  }
}

TEST_CASE("negative-density detection for an oversized perturbation") {
  RExpr bad = free_convolve(RExpr::free_poisson(0.5), RExpr::rational_pert(10.0, 2.0, 2));
  InversionConfig cfg;
  bool caught = false;
  try {
    for (int i = 0; i <= 200; ++i) {
      double x = 0.05 + 3.4 * i / 200.0;
      stieltjes_density(bad, x, cfg);
    }
  } catch (const NumericError&) {
    caught = true;  // negativity or inversion failure, either signals invalidity
  }
  CHECK(caught);
}

TEST_CASE("measure serialization round-trips") {
  auto m = mp_closed_form(0.25);
  std::string path = "/tmp/freeconv_test_measure.csv";
  m.write(path);
  auto r = SpectralMeasure::read(path);
  REQUIRE(r.grid.size() == m.grid.size());
  for (size_t i = 0; i < m.grid.size(); ++i) {
    CHECK(r.grid[i].x == m.grid[i].x);
    CHECK(r.grid[i].density == m.grid[i].density);
  }
  REQUIRE(r.atoms.size() == 1);
  CHECK(r.atoms[0].x == m.atoms[0].x);
  CHECK(r.atoms[0].mass == m.atoms[0].mass);
  CHECK(r.support_lo == m.support_lo);
  CHECK(r.support_hi == m.support_hi);
  // exact header
  CHECK(m.to_csv().substr(0, 10) == "x,density\n");
}

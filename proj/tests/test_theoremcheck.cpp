#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "json.hpp"

#include "freeconv/conditions.hpp"
#include "freeconv/cumulants.hpp"
#include "freeconv/mp.hpp"
#include "freeconv/psi.hpp"
#include "freeconv/quadrature.hpp"
#include "freeconv/theorem.hpp"

using namespace freeconv;

namespace {

std::mt19937_64 rng(424242);

// random point in the annulus 0.3 <= |z| <= 2, away from the poles of psi
Complex sample_point(double lambda) {
  std::uniform_real_distribution<double> ur(0.3, 2.0), ut(-kPi, kPi);
  double s = std::sqrt(lambda);
  while (true) {
    Complex z = std::polar(ur(rng), ut(rng));
    if (std::abs(z + s) > 0.05 && std::abs(z + 1.0 / s) > 0.05) return z;
  }
}

RExpr perturbed(double lambda, double eps, double scale = 1.0) {
  return RExpr({FreePoisson{lambda}, RationalPert{eps, 2.0, 2, scale}}).normalized();
}

}  // namespace

TEST_CASE("psi closed form at hand-checked points") {
  CHECK(std::abs(psi_closed_form(0.5, {0, 0})) == 0.0);
  CHECK(std::abs(psi_closed_form(0.25, {1, 0}) - Complex{0.25, 0}) < 1e-15);
  CHECK(std::abs(psi_closed_form(0.25, {-1, 0}) - Complex{2.25, 0}) < 1e-15);
}

TEST_CASE("psi equals the affine-composed K transform") {
  for (double lam : {0.25, 0.5, 0.75}) {
    RExpr base = RExpr::free_poisson(lam);
    for (int i = 0; i < 1000; ++i) {
      Complex z = sample_point(lam);
      CHECK(std::abs(psi_closed_form(lam, z) - psi_n(base, lam, z)) <= 1e-12);
    }
  }
}

TEST_CASE("imaginary part factorization") {
  for (double lam : {0.25, 0.5, 0.75}) {
    for (int i = 0; i < 1000; ++i) {
      Complex z = sample_point(lam);
      CHECK(std::abs(psi_closed_form(lam, z).imag() - im_psi_factored(lam, z)) <= 1e-12);
    }
  }
}

TEST_CASE("psi derivative closed form") {
  SUBCASE("vanishes exactly at +-1") {
    for (double lam : {0.25, 0.5, 0.75}) {
      CHECK(std::abs(psi_prime_closed_form(lam, {1, 0})) <= 1e-12);
      CHECK(std::abs(psi_prime_closed_form(lam, {-1, 0})) <= 1e-12);
    }
  }
  SUBCASE("slope at the origin") {
    // (1-lambda)^2/sqrt(lambda) at lambda = 1/4, confirmed by the central
    // difference below
    CHECK(std::abs(psi_prime_closed_form(0.25, {0, 0}) - Complex{1.125, 0}) < 1e-14);
  }
  SUBCASE("matches central differences of psi") {
    const double h = 1e-6;
    for (double lam : {0.25, 0.5}) {
      for (int i = 0; i < 200; ++i) {
        Complex z = sample_point(lam);
        Complex fd =
            (psi_closed_form(lam, z + Complex{h, 0}) - psi_closed_form(lam, z - Complex{h, 0})) /
            (2.0 * h);
        CHECK(std::abs(psi_prime_closed_form(lam, z) - fd) <= 1e-6);
      }
    }
  }
}

TEST_CASE("preimage roots multiply to one and map back") {
  SUBCASE("spot check") {
    Complex z0{-0.5, -0.5};
    Complex Z = psi_closed_form(0.5, z0);
    auto [r1, r2] = psi_preimage_roots(0.5, Z);
    CHECK(std::abs(r1 * r2 - 1.0) <= 1e-10);
    CHECK(std::min(std::abs(r1 - z0), std::abs(r2 - z0)) < 1e-9);
  }
  SUBCASE("random targets") {
    for (double lam : {0.25, 0.5}) {
      for (int i = 0; i < 300; ++i) {
        Complex Z = psi_closed_form(lam, sample_point(lam));
        auto [r1, r2] = psi_preimage_roots(lam, Z);
        CHECK(std::abs(r1 * r2 - 1.0) <= 1e-10);
        CHECK(std::abs(psi_closed_form(lam, r1) - Z) < 1e-8 * (1.0 + std::abs(Z)));
      }
    }
  }
}

TEST_CASE("region configuration invariants") {
  auto cfg_with = [](double lam, double r, double alpha, double eta) {
    RegionConfig c;
    c.lambda = lam;
    c.r = r;
    c.alpha = alpha;
    c.eta = eta;
    return c;
  };
  CHECK_THROWS_AS(cfg_with(1.5, 0.4, 0.09, 0.04).validate(), InvalidConfigError);
  CHECK_THROWS_AS(cfg_with(0.5, 0.4, 0.12, 0.04).validate(), InvalidConfigError);
  CHECK_THROWS_AS(cfg_with(0.5, 0.4, 0.09, 0.05).validate(), InvalidConfigError);
  CHECK_THROWS_AS(cfg_with(0.5, 2.0, 0.09, 0.04).validate(), InvalidConfigError);
  RegionConfig ok = RegionConfig::defaults(0.5);
  ok.validate();
  RegionSpec spec(ok);
  // samples really lie in their regions
  for (Complex z : spec.corona_sweep(1.0 - 1.5 * ok.eta, -3.0, -0.2, 64)) CHECK(spec.in_B(z));
  for (Complex z : spec.corona_sweep(1.0 + 1.5 * ok.eta, -3.0, -0.2, 64)) CHECK(spec.in_C(z));
  for (Complex z : spec.corona_sweep(1.0, -kPi + 2 * ok.eta, -2 * ok.eta, 64)) CHECK(spec.in_A(z));
}

TEST_CASE("critical points of the unperturbed transform sit at -1 and 1") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  auto cp = find_critical_points(RExpr::free_poisson(0.5), cfg);
  CHECK(std::abs(cp.u - Complex{-1, 0}) <= 1e-12);
  CHECK(std::abs(cp.v - Complex{1, 0}) <= 1e-12);
}

TEST_CASE("critical points of a perturbed transform") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  RExpr e = perturbed(0.5, 0.001);
  auto cp = find_critical_points(e, cfg);
  CHECK(std::abs(cp.u + 1.0) <= cfg.alpha);
  CHECK(std::abs(cp.v - 1.0) <= cfg.alpha);
  CHECK(std::abs(cp.u.imag()) <= 1e-10);
  CHECK(std::abs(cp.v.imag()) <= 1e-10);
  CHECK(std::abs(psi_n_prime(e, 0.5, cp.u)) <= 1e-11);
  CHECK(std::abs(psi_n_prime(e, 0.5, cp.v)) <= 1e-11);
}

TEST_CASE("argument principle counts the derivative zero in each disk") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  RegionSpec spec(cfg);
  RExpr e = perturbed(0.5, 0.001);
  auto f = [&](Complex z) { return psi_n_second(e, 0.5, z) / psi_n_prime(e, 0.5, z); };
  for (const Contour& c : {spec.circle_D(), spec.circle_E()}) {
    Complex raw = integrate_contour(f, c, {8, 1e-9, 26});
    CHECK(std::abs(raw / (2.0 * kPi * kI) - 1.0) < 1e-6);
  }
}

TEST_CASE("condition report for the unperturbed base passes everything") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  ConditionReport rep = check_conditions(RExpr::free_poisson(0.5), cfg, 7);
  for (int i = 0; i < ConditionReport::kCount; ++i) {
    INFO("condition ", ConditionReport::kNames[i], " note: ", rep.results[i].note);
    CHECK(rep.results[i].pass());
  }
  CHECK(rep.all_pass());
}

TEST_CASE("damped perturbation family passes at a moderate damping level") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  ConditionReport rep = check_conditions(perturbed(0.5, 0.05, 1.0 / 64.0), cfg, 7);
  INFO(rep.to_json());
  CHECK(rep.all_pass());
}

TEST_CASE("oversized perturbation fails a sign condition with a live witness") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  RExpr bad = perturbed(0.5, 10.0);
  ConditionReport rep = check_conditions(bad, cfg, 7);
  CHECK_FALSE(rep.all_pass());
  const auto& c = rep.by_name("c");
  const auto& d = rep.by_name("d");
  bool sign_failed = c.verdict == Verdict::Fail || d.verdict == Verdict::Fail;
  CHECK(sign_failed);
  if (c.verdict == Verdict::Fail) {
    // the witness must violate the inequality when re-evaluated
    CHECK(psi_n(bad, 0.5, c.witness_z).imag() >= 0.0);
    CHECK(std::abs(psi_n(bad, 0.5, c.witness_z) - c.witness_value) < 1e-12);
  }
  if (d.verdict == Verdict::Fail) {
    CHECK(psi_n(bad, 0.5, d.witness_z).imag() <= 0.0);
  }
}

TEST_CASE("condition report is reproducible and serializes with fixed keys") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  RExpr e = perturbed(0.5, 0.05, 1.0 / 64.0);
  ConditionReport r1 = check_conditions(e, cfg, 99);
  ConditionReport r2 = check_conditions(e, cfg, 99);
  CHECK(r1.to_json() == r2.to_json());
  auto j = nlohmann::json::parse(r1.to_json());
  for (const char* key : {"a", "b", "c", "d", "e", "f", "g", "c_prime", "d_prime"}) {
    REQUIRE(j.contains(key));
    CHECK(j[key].contains("pass"));
    CHECK(j[key]["witness"].contains("z_re"));
    CHECK(j[key]["witness"].contains("z_im"));
    CHECK(j[key]["witness"].contains("value_re"));
    CHECK(j[key]["witness"].contains("value_im"));
  }
}

TEST_CASE("conjugate symmetry of the perturbed transform") {
  RExpr e = perturbed(0.5, 0.05, 1.0 / 64.0);
  for (int i = 0; i < 500; ++i) {
    Complex z = sample_point(0.5);
    CHECK(std::abs(psi_n(e, 0.5, std::conj(z)) - std::conj(psi_n(e, 0.5, z))) <= 1e-12);
  }
}

TEST_CASE("gamma of the unperturbed transform is the lower unit semicircle") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  RExpr base = RExpr::free_poisson(0.5);
  auto cp = find_critical_points(base, cfg);
  auto gamma = trace_gamma(base, cfg, cp);
  REQUIRE(gamma.points.size() > 100);
  for (const auto& z : gamma.points) {
    CHECK(std::abs(std::abs(z) - 1.0) <= 1e-6);
    CHECK(z.imag() <= 1e-9);
  }
  CHECK(std::abs(gamma.points.front() - cp.u) <= 1e-12);
  CHECK(std::abs(gamma.points.back() - cp.v) <= 1e-12);
}

TEST_CASE("gamma of a perturbed transform joins the critical points") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  RExpr e = perturbed(0.5, 0.001);
  auto cp = find_critical_points(e, cfg);
  auto gamma = trace_gamma(e, cfg, cp);
  CHECK(std::abs(gamma.points.front() - cp.u) <= 1e-8);
  CHECK(std::abs(gamma.points.back() - cp.v) <= 1e-8);
  for (size_t i = 1; i + 1 < gamma.points.size(); ++i)
    CHECK(std::abs(psi_n(e, 0.5, gamma.points[i]).imag()) <= 1e-8);
  // reflected field traces the conjugate curve
  auto field_reflected = [&](Complex z) { return -psi_n(e, 0.5, std::conj(z)).imag(); };
  for (size_t i = 1; i + 1 < gamma.points.size(); i += 50)
    CHECK(std::abs(field_reflected(std::conj(gamma.points[i]))) <= 1e-8);
}

TEST_CASE("argument principle on a plain quadratic counts two preimages") {
  auto f = [](Complex z) { return 2.0 * z / (z * z - 1.0); };  // (z^2)' / (z^2 - 1)
  Complex raw = integrate_contour(f, Contour::circle({0, 0}, 2.0), {8, 1e-9, 26});
  CHECK(std::abs(raw / (2.0 * kPi * kI) - 2.0) < 1e-8);
}

TEST_CASE("preimage counts over the closed contour are one") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.1, 2.1);
  SUBCASE("unperturbed") {
    RExpr base = RExpr::free_poisson(0.5);
    auto cp = find_critical_points(base, cfg);
    auto gamma = trace_gamma(base, cfg, cp);
    for (int k = 0; k < 8; ++k) {
      Complex omega{ux(rng), uy(rng)};
      auto pc = count_preimages(base, 0.5, omega, cp, gamma, 200.0);
      CHECK(pc.count == 1);
      CHECK(pc.residual <= 1e-3);
    }
  }
  SUBCASE("perturbed") {
    RExpr e = perturbed(0.5, 0.001);
    auto cp = find_critical_points(e, cfg);
    auto gamma = trace_gamma(e, cfg, cp);
    for (int k = 0; k < 20; ++k) {
      Complex omega{ux(rng), uy(rng)};
      auto pc = count_preimages(e, 0.5, omega, cp, gamma, 200.0);
      CHECK(pc.count == 1);
      CHECK(pc.residual <= 1e-3);
    }
  }
}

TEST_CASE("measure-existence checks") {
  SUBCASE("point mass at zero: exact asymptote") {
    LemmaReport rep = verify_lemma(RExpr::zero());
    CHECK(rep.asymptotic_pass);
    CHECK(rep.analytic_pass);
    CHECK(rep.fitted_C <= 1e-9);
  }
  SUBCASE("free Poisson: asymptote constant near the mean") {
    LemmaReport rep = verify_lemma(RExpr::free_poisson(1.0));
    CHECK(rep.pass());
    CHECK(rep.fitted_C == doctest::Approx(1.0).epsilon(0.25));
  }
  SUBCASE("R with a pole at zero fails the extension check") {
    LemmaReport rep = verify_lemma(RExpr::rational_pert(1.0, 0.0, 2));
    CHECK_FALSE(rep.analytic_pass);
  }
}

TEST_CASE("gated construction") {
  RegionConfig cfg = RegionConfig::defaults(0.5);
  SUBCASE("unperturbed base reproduces the closed form") {
    auto m = construct_measure(RExpr::free_poisson(0.5), cfg);
    auto ref = mp_closed_form(0.5);
    REQUIRE(m.atoms.size() == 1);
    CHECK(std::abs(m.atoms[0].mass - 0.5) < 1e-4);
    CHECK(std::abs(m.support_lo - ref.support_lo) < 1e-6);
    CHECK(std::abs(m.support_hi - ref.support_hi) < 1e-6);
    CHECK(std::abs(m.total_mass() - 1.0) <= 1e-6);
  }
  SUBCASE("damped perturbation yields a valid measure with consistent moments") {
    RExpr e = perturbed(0.5, 0.05, 1.0 / 64.0);
    auto m = construct_measure(e, cfg);
    CHECK(std::abs(m.total_mass() - 1.0) <= 1e-6);
    auto via_grid = measure_moments(m, 8);
    auto via_kappa = cumulants_to_moments(r_taylor_coefficients(e, 8));
    for (int n = 0; n < 8; ++n)
      CHECK(std::abs(via_grid[n] - via_kappa[n]) <=
            1e-4 * std::max(1.0, std::abs(via_kappa[n])));
  }
  SUBCASE("oversized perturbation aborts at the condition gate") {
    try {
      construct_measure(perturbed(0.5, 10.0), cfg);
      FAIL("expected GateFailure");
    } catch (const GateFailure& err) {
      CHECK(err.stage == "check_conditions");
    }
  }
}

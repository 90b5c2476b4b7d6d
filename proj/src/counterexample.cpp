#include "freeconv/counterexample.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"

#include "freeconv/mp.hpp"

namespace freeconv {

RegionConfig CounterexampleConfig::region_config() const {
  RegionConfig rc = region ? *region : RegionConfig::defaults(lambda_prime);
  rc.lambda = lambda_prime;
  if (excl_radius != 0.0) rc.r = excl_radius;
  return rc;
}

void CounterexampleConfig::validate() const {
  if (!(lambda > 0)) throw InvalidConfigError("lambda must be > 0");
  if (!(lambda_prime > 0 && lambda_prime < std::min(1.0, lambda / 2.0)))
    throw InvalidConfigError("lambda_prime must lie in (0, min(1, lambda/2))");
  if (eps < 0) throw InvalidConfigError("eps must be >= 0");
  RegionConfig rc = region_config();
  rc.validate();
  // the pole must sit inside the exclusion disk around 1/(1 - lambda_prime)
  double b = 1.0 / (1.0 - lambda_prime);
  if (std::abs(center() - b) > rc.r)
    throw InvalidConfigError("pole center " + fmt_double(center()) +
                             " outside the exclusion disk around " + fmt_double(b));
}

std::pair<RExpr, RExpr> build_pair(const CounterexampleConfig& cfg) {
  cfg.validate();
  double c = cfg.center();
  RExpr plus({FreePoisson{cfg.lambda_prime}, RationalPert{cfg.eps, c, 2, 1.0}});
  RExpr minus({FreePoisson{cfg.lambda_prime}, RationalPert{-cfg.eps, c, 2, 1.0},
               FreePoisson{cfg.lambda - 2.0 * cfg.lambda_prime}});
  return {plus.normalized(), minus.normalized()};
}

PoissonCertificate poisson_translate_certificate(const CumulantSeq& kappa, double tol) {
  if (kappa.size() < 3)
    throw InvalidConfigError("certificate needs at least 3 cumulants");
  PoissonCertificate cert;
  cert.is_translated_free_poisson = true;
  for (size_t i = 1; i < kappa.size(); ++i) {
    for (size_t j = i + 1; j < kappa.size(); ++j) {
      double gap = std::abs(kappa[i] - kappa[j]);
      if (gap > cert.gap) {
        cert.gap = gap;
        cert.m = static_cast<int>(i + 1);
        cert.m_prime = static_cast<int>(j + 1);
        cert.kappa_m = kappa[i];
        cert.kappa_m_prime = kappa[j];
      }
    }
  }
  if (cert.gap > tol) cert.is_translated_free_poisson = false;
  return cert;
}

namespace {

RExpr perturbed_factor(const CounterexampleConfig& cfg, double eps, double sign) {
  return RExpr({FreePoisson{cfg.lambda_prime}, RationalPert{sign * eps, cfg.center(), 2, 1.0}})
      .normalized();
}

}  // namespace

SearchOutcome search_epsilon(const CounterexampleConfig& cfg, std::span<const double> grid) {
  if (grid.empty()) throw InvalidConfigError("search_epsilon: empty grid");
  RegionConfig rc = cfg.region_config();
  SearchOutcome out;
  for (double eps : grid) {
    CounterexampleConfig trial = cfg;
    trial.eps = eps;
    try {
      trial.validate();
      construct_measure(perturbed_factor(trial, eps, +1.0), rc, {}, {}, cfg.seed);
      construct_measure(perturbed_factor(trial, eps, -1.0), rc, {}, {}, cfg.seed);
      out.eps = eps;
      return out;
    } catch (const NumericError& err) {
      out.failures.push_back({eps, err.what()});
    }
  }
  std::string msg = "search_epsilon: grid exhausted;";
  for (const auto& [eps, what] : out.failures)
    msg += " eps=" + fmt_double(eps) + ": " + what.substr(0, 120) + ";";
  throw NumericError(msg);
}

RaikovReport verify_raikov_failure(const CounterexampleConfig& cfg) {
  cfg.validate();
  RaikovReport rep;
  rep.epsilon_used = cfg.eps;
  rep.lambda = cfg.lambda;
  rep.lambda_prime = cfg.lambda_prime;
  rep.pole_center = cfg.center();
  RegionConfig rc = cfg.region_config();

  auto [plus, minus] = build_pair(cfg);

  // exact symbolic cancellation of the perturbations
  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    RExpr target = RExpr::free_poisson(cfg.lambda);
    for (int i = 0; i < 1000; ++i) {
      Complex z{u(rng), u(rng)};
      if (target.min_pole_distance(z) < 0.1 || plus.min_pole_distance(z) < 0.1) continue;
      Complex dev = plus.eval(z) + minus.eval(z) - target.eval(z);
      if (std::abs(dev) > 1e-14) {
        rep.failing_stage = "build_pair";
        return rep;
      }
    }
    if (!(free_convolve(plus, minus) == target)) {
      rep.failing_stage = "build_pair";
      return rep;
    }
  }

  // construct the factors: the theorem gates run on the perturbed
  // lambda'-family; the composite minus side then goes through the inversion
  // pipeline (its free Poisson rate lambda - lambda' can exceed the
  // region analysis range)
  try {
    rep.plus_measure = construct_measure(plus, rc, {}, {}, cfg.seed);
  } catch (const NumericError& err) {
    rep.failing_stage = std::string("construct_plus: ") + err.what();
    return rep;
  }
  try {
    construct_measure(perturbed_factor(cfg, cfg.eps, -1.0), rc, {}, {}, cfg.seed);
    LemmaReport lr = verify_lemma(minus);
    if (!lr.pass()) throw GateFailure("verify_lemma", lr.to_json());
    rep.minus_measure = build_measure(minus);
  } catch (const NumericError& err) {
    rep.failing_stage = std::string("construct_minus: ") + err.what();
    return rep;
  }

  // neither factor may be a translated free Poisson law
  rep.cert_plus = poisson_translate_certificate(r_taylor_coefficients(plus, 8));
  rep.cert_minus = poisson_translate_certificate(r_taylor_coefficients(minus, 8));
  if (rep.cert_plus.is_translated_free_poisson) {
    rep.failing_stage = "certificate_plus";
    return rep;
  }
  if (rep.cert_minus.is_translated_free_poisson) {
    rep.failing_stage = "certificate_minus";
    return rep;
  }

  // the convolution must reproduce the free Poisson law with mean lambda
  try {
    RExpr conv = free_convolve(plus, minus);
    rep.convolution_measure = build_measure(conv, InversionConfig::accurate());
    double lo, hi;
    mp_support(cfg.lambda, &lo, &hi);
    double worst = 0.0;
    for (const auto& g : rep.convolution_measure.grid) {
      if (g.x < lo + 0.05 || g.x > hi - 0.05) continue;
      worst = std::max(worst, std::abs(g.density - mp_density(cfg.lambda, g.x)));
    }
    rep.sum_check = worst;
    if (worst > 1e-6) {
      rep.failing_stage = "sum_check";
      return rep;
    }
  } catch (const NumericError& err) {
    rep.failing_stage = std::string("convolution: ") + err.what();
    return rep;
  }

  rep.affirmative = true;
  return rep;
}

std::string RaikovReport::to_json(const std::string& dir, const std::string& stem) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto path = [&](const std::string& suffix) {
    return (fs::path(dir) / (stem + "_" + suffix + ".csv")).string();
  };
  nlohmann::json j;
  j["affirmative"] = affirmative;
  j["failing_stage"] = failing_stage;
  j["epsilon_used"] = epsilon_used;
  j["lambda"] = lambda;
  j["lambda_prime"] = lambda_prime;
  j["pole_center"] = pole_center;
  j["sum_check"] = sum_check;
  auto cert_json = [](const PoissonCertificate& c) {
    return nlohmann::json{{"is_translated_free_poisson", c.is_translated_free_poisson},
                          {"m", c.m},
                          {"m_prime", c.m_prime},
                          {"kappa_m", c.kappa_m},
                          {"kappa_m_prime", c.kappa_m_prime},
                          {"gap", c.gap}};
  };
  j["certificates"] = {{"plus", cert_json(cert_plus)}, {"minus", cert_json(cert_minus)}};
  if (!plus_measure.grid.empty() || !plus_measure.atoms.empty()) {
    plus_measure.write(path("plus"));
    j["plus_measure"] = {{"csv", path("plus")}, {"sidecar", path("plus") + ".json"}};
  }
  if (!minus_measure.grid.empty() || !minus_measure.atoms.empty()) {
    minus_measure.write(path("minus"));
    j["minus_measure"] = {{"csv", path("minus")}, {"sidecar", path("minus") + ".json"}};
  }
  if (!convolution_measure.grid.empty()) {
    convolution_measure.write(path("convolution"));
    j["convolution_measure"] = {{"csv", path("convolution")},
                                {"sidecar", path("convolution") + ".json"}};
  }
  return j.dump(2) + "\n";
}

}  // namespace freeconv

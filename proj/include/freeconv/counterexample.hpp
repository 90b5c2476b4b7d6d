#pragma once

#include <optional>

#include "freeconv/cumulants.hpp"
#include "freeconv/theorem.hpp"

namespace freeconv {

// Parameters for the two-measure construction whose free convolution is the
// free Poisson law with mean `lambda` while neither factor is a translated
// free Poisson law. lambda_prime must lie in (0, min(1, lambda/2)); the
// rational perturbation of order 2 sits at pole_center, inside the exclusion
// disk of radius excl_radius around 1/(1 - lambda_prime).
struct CounterexampleConfig {
  double lambda = 1.5;
  double lambda_prime = 0.5;
  double eps = 0.0;          // 0 allowed only for the degenerate control
  double pole_center = 0.0;  // 0 -> 1/(1 - lambda_prime)
  double excl_radius = 0.0;  // 0 -> region default
  std::optional<RegionConfig> region;  // defaults derived from lambda_prime
  uint64_t seed = 20240901;

  double center() const { return pole_center != 0.0 ? pole_center : 1.0 / (1.0 - lambda_prime); }
  RegionConfig region_config() const;
  void validate() const;
};

// R-transforms lambda'/(1-z) +- eps/(z-c)^2, the minus side carrying the
// remaining free Poisson rate so the symbolic sum collapses to
// lambda/(1-z) exactly.
std::pair<RExpr, RExpr> build_pair(const CounterexampleConfig& cfg);

struct PoissonCertificate {
  bool is_translated_free_poisson = false;
  int m = 0, m_prime = 0;         // witness cumulant indices (when false)
  double kappa_m = 0.0, kappa_m_prime = 0.0;
  double gap = 0.0;               // |kappa_m - kappa_m_prime|
};

// A measure is a translated free Poisson law iff its free cumulants are
// constant from order 2 on (translation moves only kappa_1). Requires at
// least 3 cumulants.
PoissonCertificate poisson_translate_certificate(const CumulantSeq& kappa, double tol = 1e-6);

struct SearchOutcome {
  double eps = 0.0;
  std::vector<std::pair<double, std::string>> failures;  // per-eps failure notes
};

// Largest eps in `grid` (descending sweep) for which the theorem gates accept
// both perturbed factors lambda'/(1-z) +- eps/(z-c)^2. Throws NumericError
// with the per-eps failure log when the grid is exhausted.
SearchOutcome search_epsilon(const CounterexampleConfig& cfg, std::span<const double> grid);

struct RaikovReport {
  bool affirmative = false;
  std::string failing_stage;  // empty when affirmative
  double epsilon_used = 0.0;
  double lambda = 0.0, lambda_prime = 0.0, pole_center = 0.0;
  SpectralMeasure plus_measure, minus_measure, convolution_measure;
  PoissonCertificate cert_plus, cert_minus;
  double sum_check = 0.0;  // max density deviation of the convolution from
                           // the closed-form free Poisson law
  // Writes <stem>_plus.csv(.json), <stem>_minus.csv(.json),
  // <stem>_convolution.csv(.json) plus the report JSON referencing them.
  std::string to_json(const std::string& dir, const std::string& stem) const;
};

// End-to-end construction and certification: builds the pair, constructs both
// measures (theorem gates on the perturbed factors, inversion pipeline on the
// composite minus side), certifies both as NOT translated free Poisson, and
// compares the convolution measure against the closed-form target.
RaikovReport verify_raikov_failure(const CounterexampleConfig& cfg);

}  // namespace freeconv

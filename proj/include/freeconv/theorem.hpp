#pragma once

#include "freeconv/build.hpp"
#include "freeconv/conditions.hpp"
#include "freeconv/trace.hpp"

namespace freeconv {

struct CriticalPoints {
  Complex u;  // zero of psi_n' in D (near -1), real
  Complex v;  // zero of psi_n' in E (near +1), real
};

// Newton on psi_n' from seeds -1 and +1. Enforces u in D, v in E and
// |Im u|, |Im v| <= 1e-10.
CriticalPoints find_critical_points(const RExpr& e, const RegionConfig& cfg);

// Traces the level curve Im psi_n = 0 from u to v through the closed lower
// half plane (the curve lies on the unit circle when the perturbation
// vanishes). Every traced point is re-validated against |Im psi_n| <= 1e-9
// and membership of A, D or E; violations throw DomainViolationError.
TracedCurve trace_gamma(const RExpr& e, const RegionConfig& cfg, const CriticalPoints& cp,
                        double step = 2e-3);

struct PreimageCount {
  long count = 0;
  double residual = 0.0;  // |raw integral - 2*pi*i*count|
};

// Argument-principle preimage count of omega (Im omega > 0) for psi_n over
// the closed contour made of gamma reversed, the real segments [v, R] and
// [-R, -1/sqrt(lambda) - 1/R], [-1/sqrt(lambda) + 1/R, u], the big lower
// semicircle |z| = R and the small lower semicircle around -1/sqrt(lambda),
// positively oriented. Requires R > 100. A residual above 1e-3 throws (the
// count would be inconclusive).
PreimageCount count_preimages(const RExpr& e, double lambda, Complex omega,
                              const CriticalPoints& cp, const TracedCurve& gamma, double R,
                              const QuadratureConfig& qcfg = {8, 1e-6, 26});

struct LemmaReport {
  bool asymptotic_pass = false;   // z G(z) -> 1 with 1/|z| decay
  double fitted_C = 0.0;          // fitted constant in |zG - 1| ~ C/|z|
  bool analytic_pass = false;     // R extends analytically to a neighborhood of 0
  double max_coeff_dev = 0.0;     // radius-consistency of Cauchy coefficients
  double max_reconstruction_err = 0.0;
  std::string note;

  bool pass() const { return asymptotic_pass && analytic_pass; }
  std::string to_json() const;
};

// Checks the two measure-existence hypotheses: (i) z G(z) -> 1 along rays in
// the upper half plane with C/|z| decay, (ii) R = K - 1/z extends
// analytically to a neighborhood of 0 (Cauchy coefficients agree across two
// radii and their truncated series reproduces R well inside). Violations are
// reported, not thrown.
LemmaReport verify_lemma(const RExpr& e, const InversionConfig& icfg = {});

// Full gate sequence for a perturbed free Poisson R-transform with base rate
// cfg.lambda: check_conditions -> find_critical_points -> trace_gamma ->
// count_preimages over sampled omega -> verify_lemma -> measure
// construction. Throws GateFailure naming the failing stage.
SpectralMeasure construct_measure(const RExpr& e, const RegionConfig& cfg,
                                  const InversionConfig& icfg = {}, const BuildConfig& bcfg = {},
                                  uint64_t seed = 20240901);

}  // namespace freeconv

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "freeconv/regions.hpp"
#include "freeconv/rexpr.hpp"

namespace freeconv {

enum class Verdict { Pass, Fail, Indeterminate };

struct ConditionResult {
  Verdict verdict = Verdict::Indeterminate;
  Complex witness_z{};      // worst sample / failing target
  Complex witness_value{};  // psi_n there, or (count, residual) for count checks
  std::string note;

  bool pass() const { return verdict == Verdict::Pass; }
};

// Verdicts for the sign, monotonicity, injectivity and critical-point
// confinement conditions of the perturbed rescaled transform on the regions
// A, B, C, D, E:
//  a  injectivity on A (argument-principle preimage counts == 1)
//  b  injectivity on the coronas B and C
//  c  Im psi_n < 0 on B for theta in [-pi+eta, -eta]
//  d  Im psi_n > 0 on C for theta in [-pi+eta, -eta]
//  e  radial derivative of Im psi_n > 0 on A for theta in [-pi+eta, -eta]
//  f  exactly one zero of psi_n' in each of D and E, and sampled preimage
//     counts on D, E stay <= 2
//  g  those zeros are confined to the eta-disks around -+1 (no zeros of
//     psi_n' elsewhere in D or E)
//  c' Im psi_n < 0 on B for all theta in (-pi, 0)
//  d' Im psi_n > 0 on C for all theta in (-pi, 0)
struct ConditionReport {
  static constexpr int kCount = 9;
  static const std::array<const char*, kCount> kNames;  // "a".."g", "c_prime", "d_prime"

  std::array<ConditionResult, kCount> results;
  double lambda = 0.0;
  uint64_t seed = 0;

  const ConditionResult& by_name(const std::string& name) const;
  bool all_pass() const;
  bool any_indeterminate() const;
  std::string to_json() const;
};

// Samples and contour-integrates the conditions for psi_n built from `e`
// (free Poisson base lambda = cfg.lambda plus perturbation). Quadrature or
// sampling failures mark the condition indeterminate, never silently passed.
// Reports are reproducible: all sampled targets derive from `seed`.
ConditionReport check_conditions(const RExpr& e, const RegionConfig& cfg, uint64_t seed);

}  // namespace freeconv

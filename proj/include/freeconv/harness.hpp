#pragma once

#include <cstdint>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv {

// Wishart sampling parameters: eigenvalues of (1/p) X X^T with X a p x n
// standard Gaussian matrix, n = round(lambda * p); the two-block variant sums
// independent Wishart matrices with rates lambda1, lambda2.
struct EnsembleSpec {
  int p = 1000;
  double lambda1 = 1.0;
  double lambda2 = 0.0;  // 0: single-block ensemble
  uint64_t seed = 1;
  int trials = 1;

  void validate(bool two_block) const;
};

struct EmpiricalSpectrum {
  std::vector<double> eigenvalues;  // sorted ascending, p * trials entries
  int p = 0;
  int trials = 0;
  uint64_t seed = 0;
};

// Trials run concurrently (capped by FREECONV_THREADS) with per-trial seeds
// seed + trial index; the pooled spectrum is deterministic for fixed inputs.
EmpiricalSpectrum sample_wishart_spectrum(const EnsembleSpec& spec);
EmpiricalSpectrum sample_free_sum_spectrum(const EnsembleSpec& spec);

// sup_x |empirical CDF - model CDF| over the eigenvalue locations; the model
// CDF combines atom jumps with the trapezoid-integrated density. The measure
// must carry total mass 1 within 1e-6.
double kolmogorov_distance(const EmpiricalSpectrum& emp, const SpectralMeasure& m);

// Worker-count cap from FREECONV_THREADS (hardware concurrency otherwise).
int worker_count();

}  // namespace freeconv

#include "freeconv/harness.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include "freeconv/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace freeconv {

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("FREECONV_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) hw = std::min(hw, cap);
  }
  return hw;
}

void EnsembleSpec::validate(bool two_block) const {
  if (p < 50) throw InvalidConfigError("ensemble dimension must be >= 50");
  if (trials < 1) throw InvalidConfigError("trials must be >= 1");
  if (!(lambda1 > 0) || std::lround(lambda1 * p) < 1)
    throw InvalidConfigError("need round(lambda1 * p) >= 1");
  if (two_block && (!(lambda2 > 0) || std::lround(lambda2 * p) < 1))
    throw InvalidConfigError("need round(lambda2 * p) >= 1");
}

namespace {

// accumulates (1/p) X X^T into S (lower triangle) for a fresh Gaussian X
void accumulate_wishart(std::mt19937_64& eng, int p, int n, std::vector<double>& X,
                        std::vector<double>& S, double beta) {
  std::normal_distribution<double> gauss;
  X.resize(static_cast<size_t>(p) * n);
  for (auto& v : X) v = gauss(eng);
  cblas_dsyrk(CblasRowMajor, CblasLower, CblasNoTrans, p, n, 1.0 / p, X.data(), n, beta,
              S.data(), p);
}

std::vector<double> trial_eigenvalues(const EnsembleSpec& spec, int trial, bool two_block) {
  const int p = spec.p;
  std::mt19937_64 eng(spec.seed + static_cast<uint64_t>(trial));
  std::vector<double> X, S(static_cast<size_t>(p) * p, 0.0), w(p);
  accumulate_wishart(eng, p, static_cast<int>(std::lround(spec.lambda1 * p)), X, S, 0.0);
  if (two_block)
    accumulate_wishart(eng, p, static_cast<int>(std::lround(spec.lambda2 * p)), X, S, 1.0);
  int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'N', 'L', p, S.data(), p, w.data());
  if (info != 0)
    throw NumericError("eigensolver failed (info " + std::to_string(info) + ")");
  return w;
}

EmpiricalSpectrum sample_impl(const EnsembleSpec& spec, bool two_block) {
  spec.validate(two_block);
  std::vector<std::vector<double>> per_trial(spec.trials);

  int workers = std::min(worker_count(), spec.trials);
  if (workers > 1) openblas_set_num_threads(1);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::atomic<int> next{0};
  auto run = [&]() {
    for (int t = next.fetch_add(1); t < spec.trials; t = next.fetch_add(1)) {
      try {
        per_trial[t] = trial_eigenvalues(spec, t, two_block);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    openblas_set_num_threads(0);  // restore library default
  }
  if (first_error) std::rethrow_exception(first_error);

  EmpiricalSpectrum emp;
  emp.p = spec.p;
  emp.trials = spec.trials;
  emp.seed = spec.seed;
  emp.eigenvalues.reserve(static_cast<size_t>(spec.p) * spec.trials);
  for (const auto& v : per_trial)
    emp.eigenvalues.insert(emp.eigenvalues.end(), v.begin(), v.end());
  std::sort(emp.eigenvalues.begin(), emp.eigenvalues.end());
  return emp;
}

}  // namespace

EmpiricalSpectrum sample_wishart_spectrum(const EnsembleSpec& spec) {
  return sample_impl(spec, false);
}

EmpiricalSpectrum sample_free_sum_spectrum(const EnsembleSpec& spec) {
  return sample_impl(spec, true);
}

double kolmogorov_distance(const EmpiricalSpectrum& emp, const SpectralMeasure& m) {
  if (emp.eigenvalues.empty()) throw InvalidConfigError("empty spectrum");
  double mass = m.total_mass();
  if (std::abs(mass - 1.0) > 1e-6)
    throw MassError("kolmogorov_distance requires unit mass", mass);

  // cumulative trapezoid over the grid, atoms as jumps at x - 1e-9
  const auto& g = m.grid;
  std::vector<double> cum(g.size(), 0.0);
  for (size_t i = 1; i < g.size(); ++i)
    cum[i] = cum[i - 1] + 0.5 * (g[i].x - g[i - 1].x) * (g[i].density + g[i - 1].density);
  auto model_cdf = [&](double x) {
    double F = 0.0;
    for (const auto& a : m.atoms)
      if (a.x - 1e-9 <= x) F += a.mass;
    if (!g.empty() && x >= g.front().x) {
      if (x >= g.back().x) {
        F += cum.back();
      } else {
        size_t hi = std::upper_bound(g.begin(), g.end(), x,
                                     [](double val, const GridPoint& p) { return val < p.x; }) -
                    g.begin();
        size_t lo = hi - 1;
        double t = (x - g[lo].x) / (g[hi].x - g[lo].x);
        double d_mid = g[lo].density + t * (g[hi].density - g[lo].density);
        F += cum[lo] + 0.5 * (x - g[lo].x) * (g[lo].density + d_mid);
      }
    }
    return F / mass;
  };

  const auto& ev = emp.eigenvalues;
  const double N = static_cast<double>(ev.size());
  double dist = 0.0;
  for (size_t i = 0; i < ev.size(); ++i) {
    double F = model_cdf(ev[i]);
    dist = std::max(dist, std::max(F - i / N, (i + 1) / N - F));
  }
  return dist;
}

}  // namespace freeconv

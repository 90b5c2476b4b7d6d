#include "freeconv/conditions.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "json.hpp"

#include "freeconv/psi.hpp"
#include "freeconv/quadrature.hpp"

namespace freeconv {

const std::array<const char*, ConditionReport::kCount> ConditionReport::kNames = {
    "a", "b", "c", "d", "e", "f", "g", "c_prime", "d_prime"};

const ConditionResult& ConditionReport::by_name(const std::string& name) const {
  for (int i = 0; i < kCount; ++i)
    if (name == kNames[i]) return results[i];
  throw InvalidConfigError("unknown condition " + name);
}

bool ConditionReport::all_pass() const {
  for (const auto& r : results)
    if (!r.pass()) return false;
  return true;
}

bool ConditionReport::any_indeterminate() const {
  for (const auto& r : results)
    if (r.verdict == Verdict::Indeterminate) return true;
  return false;
}

std::string ConditionReport::to_json() const {
  nlohmann::json j;
  for (int i = 0; i < kCount; ++i) {
    const auto& r = results[i];
    j[kNames[i]] = {{"pass", r.pass()},
                    {"witness",
                     {{"z_re", r.witness_z.real()},
                      {"z_im", r.witness_z.imag()},
                      {"value_re", r.witness_value.real()},
                      {"value_im", r.witness_value.imag()}}}};
    if (r.verdict == Verdict::Indeterminate) j[kNames[i]]["indeterminate"] = true;
    if (!r.note.empty()) j[kNames[i]]["note"] = r.note;
  }
  j["all_pass"] = all_pass();
  j["lambda"] = lambda;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

namespace {

struct Checker {
  const RExpr& e;
  const RegionConfig& cfg;
  RegionSpec spec;
  std::mt19937_64 rng;
  QuadratureConfig quad{8, 1e-8, 24};

  Checker(const RExpr& e_, const RegionConfig& cfg_, uint64_t seed)
      : e(e_), cfg(cfg_), spec(cfg_), rng(seed) {}

  Complex psi(Complex z) const { return psi_n(e, cfg.lambda, z); }
  Complex psi_p(Complex z) const { return psi_n_prime(e, cfg.lambda, z); }
  Complex psi_pp(Complex z) const { return psi_n_second(e, cfg.lambda, z); }

  double jitter(double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return u(rng);
  }

  // ---- sign conditions (c), (d), (c'), (d') ----

  ConditionResult sign_condition(bool on_B, bool open_angles) {
    ConditionResult res;
    const double eta = cfg.eta;
    const int n = cfg.corona_samples;
    const double sgn = on_B ? -1.0 : 1.0;  // want sgn * Im psi_n > 0
    double worst = std::numeric_limits<double>::infinity();
    try {
      for (int k = 0; k < 5; ++k) {
        double rho = on_B ? 1.0 - 2.0 * eta + k * (eta / 4.0) : 1.0 + eta + k * (eta / 4.0);
        for (int j = 0; j < n; ++j) {
          double th;
          if (open_angles) {
            th = -kPi + (j + 0.5) * kPi / n;
          } else {
            th = (-kPi + eta) + j * (kPi - 2.0 * eta) / (n - 1.0);
          }
          Complex z = rho * Complex{std::cos(th), std::sin(th)};
          Complex v = psi(z);
          double margin = sgn * v.imag();
          if (margin < worst) {
            worst = margin;
            res.witness_z = z;
            res.witness_value = v;
          }
        }
      }
      res.verdict = worst > 0.0 ? Verdict::Pass : Verdict::Fail;
    } catch (const NumericError& err) {
      res.verdict = Verdict::Indeterminate;
      res.note = err.what();
    }
    return res;
  }

  // ---- (e): radial monotonicity of Im psi_n on A ----

  ConditionResult radial_condition() {
    ConditionResult res;
    const double eta = cfg.eta, h = 1e-5;
    const int n = cfg.corona_samples;
    double worst = std::numeric_limits<double>::infinity();
    try {
      for (int k = 0; k < 5; ++k) {
        double rho = 1.0 - eta + k * (eta / 2.0);
        for (int j = 0; j < n; ++j) {
          double th = (-kPi + eta) + j * (kPi - 2.0 * eta) / (n - 1.0);
          Complex dir{std::cos(th), std::sin(th)};
          Complex z = rho * dir;
          if (std::abs(z - 1.0) < eta + 2.0 * h || std::abs(z + 1.0) < eta + 2.0 * h) continue;
          double d = (psi((rho + h) * dir).imag() - psi((rho - h) * dir).imag()) / (2.0 * h);
          if (d < worst) {
            worst = d;
            res.witness_z = z;
            res.witness_value = psi(z);
          }
        }
      }
      res.verdict = worst > 0.0 ? Verdict::Pass : Verdict::Fail;
    } catch (const NumericError& err) {
      res.verdict = Verdict::Indeterminate;
      res.note = err.what();
    }
    return res;
  }

  // ---- argument-principle helpers ----

  ComplexFn preimage_integrand(Complex target) const {
    return [this, target](Complex z) -> Complex {
      try {
        return psi_p(z) / (psi(z) - target);
      } catch (const PoleError&) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return Complex{inf, inf};
      }
    };
  }

  // number of preimages of `target` inside `path` (counted with multiplicity)
  long count_inside(Complex target, const Contour& path, double* residual) const {
    Complex raw = integrate_contour(preimage_integrand(target), path, quad);
    Complex over = raw / (2.0 * kPi * kI);
    long n = std::lround(over.real());
    *residual = std::abs(raw - 2.0 * kPi * kI * static_cast<double>(n));
    return n;
  }

  long zeros_of_derivative(const Contour& path, double* residual) const {
    auto f = [this](Complex z) -> Complex {
      try {
        return psi_pp(z) / psi_p(z);
      } catch (const PoleError&) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return Complex{inf, inf};
      }
    };
    Complex raw = integrate_contour(f, path, quad);
    Complex over = raw / (2.0 * kPi * kI);
    long n = std::lround(over.real());
    *residual = std::abs(raw - 2.0 * kPi * kI * static_cast<double>(n));
    return n;
  }

  // checks count == expected for every target; count <= max allowed when
  // expected < 0 is passed as the bound marker
  ConditionResult preimage_counts(const std::vector<Complex>& targets, const Contour& outer,
                                  const Contour* inner, long expected, long at_most) {
    ConditionResult res;
    try {
      for (Complex z0 : targets) {
        Complex t = psi(z0);
        double r1 = 0.0, r2 = 0.0;
        long n = count_inside(t, outer, &r1);
        if (inner) n -= count_inside(t, *inner, &r2);
        double resid = r1 + r2;
        if (resid > 1e-2) {
          res.verdict = Verdict::Indeterminate;
          res.witness_z = z0;
          res.witness_value = {static_cast<double>(n), resid};
          res.note = "count integral residual " + fmt_double(resid);
          return res;
        }
        bool ok = expected >= 0 ? n == expected : n <= at_most;
        if (!ok) {
          res.verdict = Verdict::Fail;
          res.witness_z = z0;
          res.witness_value = {static_cast<double>(n), resid};
          return res;
        }
      }
      res.verdict = Verdict::Pass;
      if (!targets.empty()) {
        res.witness_z = targets.front();
        res.witness_value = psi(targets.front());
      }
    } catch (const NumericError& err) {
      res.verdict = Verdict::Indeterminate;
      res.note = err.what();
    }
    return res;
  }
};

}  // namespace

ConditionReport check_conditions(const RExpr& e, const RegionConfig& cfg, uint64_t seed) {
  cfg.validate();
  Checker ck(e, cfg, seed);
  ConditionReport rep;
  rep.lambda = cfg.lambda;
  rep.seed = seed;
  const double eta = cfg.eta, alpha = cfg.alpha;

  // (c), (d), (c'), (d')
  rep.results[2] = ck.sign_condition(true, false);
  rep.results[3] = ck.sign_condition(false, false);
  rep.results[7] = ck.sign_condition(true, true);
  rep.results[8] = ck.sign_condition(false, true);

  // (e)
  rep.results[4] = ck.radial_condition();

  // (a): injectivity on A via sampled preimage counts on its boundary
  {
    std::vector<Complex> targets;
    const double base_th[] = {-2.9, -2.6, -2.2, -1.9, -1.57, -1.2, -0.9, -0.6, -0.35};
    for (double th0 : base_th) {
      for (double rho0 : {1.0 - eta / 2.0, 1.0 + eta / 2.0}) {
        double th = th0 + ck.jitter(0.02);
        double rho = rho0 + ck.jitter(eta / 8.0);
        Complex z = rho * Complex{std::cos(th), std::sin(th)};
        if (std::abs(z - 1.0) >= 2.0 * eta && std::abs(z + 1.0) >= 2.0 * eta)
          targets.push_back(z);
      }
    }
    rep.results[0] = ck.preimage_counts(targets, ck.spec.boundary_A(), nullptr, 1, 1);
  }

  // (b): injectivity on the full coronas B and C
  {
    std::vector<Complex> targets_b, targets_c;
    const double base_th[] = {0.1, 0.9, 1.7, 2.5, -2.9, -2.1, -1.3, -0.5};
    for (double th0 : base_th) {
      double th = th0 + ck.jitter(0.05);
      targets_b.push_back((1.0 - 1.5 * eta + ck.jitter(eta / 8.0)) *
                          Complex{std::cos(th), std::sin(th)});
      targets_c.push_back((1.0 + 1.5 * eta + ck.jitter(eta / 8.0)) *
                          Complex{std::cos(th), std::sin(th)});
    }
    Contour b_out = ck.spec.circle_B_outer(), b_in = ck.spec.circle_B_inner();
    ConditionResult rb = ck.preimage_counts(targets_b, b_out, &b_in, 1, 1);
    if (rb.pass()) {
      Contour c_out = ck.spec.circle_C_outer(), c_in = ck.spec.circle_C_inner();
      rb = ck.preimage_counts(targets_c, c_out, &c_in, 1, 1);
    }
    rep.results[1] = rb;
  }

  // (f): one zero of psi_n' in each alpha-disk; sampled preimage counts <= 2
  long zeros_D = -1, zeros_E = -1;
  {
    ConditionResult res;
    try {
      double rd = 0.0, re2 = 0.0;
      zeros_D = ck.zeros_of_derivative(ck.spec.circle_D(), &rd);
      zeros_E = ck.zeros_of_derivative(ck.spec.circle_E(), &re2);
      if (rd + re2 > 1e-2) {
        res.verdict = Verdict::Indeterminate;
        res.note = "zero-count residual " + fmt_double(rd + re2);
      } else if (zeros_D != 1 || zeros_E != 1) {
        res.verdict = Verdict::Fail;
        res.witness_z = zeros_D != 1 ? Complex{-1, 0} : Complex{1, 0};
        res.witness_value = {static_cast<double>(zeros_D), static_cast<double>(zeros_E)};
      } else {
        std::vector<Complex> targets_d, targets_e;
        for (int k = 0; k < 8; ++k) {
          double phi = k * (2.0 * kPi / 8.0) + ck.jitter(0.2);
          double rr = alpha * (0.35 + 0.25 * std::abs(ck.jitter(1.0)));
          targets_d.push_back(Complex{-1, 0} + rr * Complex{std::cos(phi), std::sin(phi)});
          targets_e.push_back(Complex{1, 0} + rr * Complex{std::cos(phi), std::sin(phi)});
        }
        res = ck.preimage_counts(targets_d, ck.spec.circle_D(), nullptr, -1, 2);
        if (res.pass()) res = ck.preimage_counts(targets_e, ck.spec.circle_E(), nullptr, -1, 2);
        if (res.pass()) res.witness_value = {1.0, 1.0};
      }
    } catch (const NumericError& err) {
      res.verdict = Verdict::Indeterminate;
      res.note = err.what();
    }
    rep.results[5] = res;
  }

  // (g): the critical points stay inside the eta-disks (no zeros of psi_n'
  // in the annular remainders of D and E)
  {
    ConditionResult res;
    try {
      if (zeros_D < 0) {
        res.verdict = Verdict::Indeterminate;
        res.note = "derivative zero counts unavailable";
      } else {
        double rd = 0.0, re2 = 0.0;
        long in_eta_D = ck.zeros_of_derivative(ck.spec.circle_D_eta(), &rd);
        long in_eta_E = ck.zeros_of_derivative(ck.spec.circle_E_eta(), &re2);
        if (rd + re2 > 1e-2) {
          res.verdict = Verdict::Indeterminate;
          res.note = "zero-count residual " + fmt_double(rd + re2);
        } else if (in_eta_D == zeros_D && in_eta_E == zeros_E) {
          res.verdict = Verdict::Pass;
          res.witness_value = {static_cast<double>(in_eta_D), static_cast<double>(in_eta_E)};
        } else {
          res.verdict = Verdict::Fail;
          res.witness_z = in_eta_D != zeros_D ? Complex{-1, 0} : Complex{1, 0};
          res.witness_value = {static_cast<double>(in_eta_D), static_cast<double>(in_eta_E)};
        }
      }
    } catch (const NumericError& err) {
      res.verdict = Verdict::Indeterminate;
      res.note = err.what();
    }
    rep.results[6] = res;
  }

  return rep;
}

}  // namespace freeconv

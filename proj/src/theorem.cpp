#include "freeconv/theorem.hpp"

#include <cmath>
#include <random>

#include "json.hpp"

#include "freeconv/cumulants.hpp"
#include "freeconv/newton.hpp"
#include "freeconv/psi.hpp"
#include "freeconv/quadrature.hpp"

namespace freeconv {

CriticalPoints find_critical_points(const RExpr& e, const RegionConfig& cfg) {
  cfg.validate();
  auto f = [&](Complex z) -> Complex {
    try {
      return psi_n_prime(e, cfg.lambda, z);
    } catch (const PoleError&) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      return Complex{inf, inf};
    }
  };
  auto fp = [&](Complex z) -> Complex {
    try {
      return psi_n_second(e, cfg.lambda, z);
    } catch (const PoleError&) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      return Complex{inf, inf};
    }
  };
  CriticalPoints cp;
  cp.u = newton_solve(f, fp, {-1.0, 0.0}, 1e-12, 100);
  cp.v = newton_solve(f, fp, {1.0, 0.0}, 1e-12, 100);
  if (std::abs(cp.u + 1.0) > cfg.alpha)
    throw DomainViolationError("critical point escaped D", cp.u);
  if (std::abs(cp.v - 1.0) > cfg.alpha)
    throw DomainViolationError("critical point escaped E", cp.v);
  if (std::abs(cp.u.imag()) > 1e-10 || std::abs(cp.v.imag()) > 1e-10)
    throw SymmetryViolationError("critical points must be real: u = " + fmt_complex(cp.u) +
                                 ", v = " + fmt_complex(cp.v));
  return cp;
}

TracedCurve trace_gamma(const RExpr& e, const RegionConfig& cfg, const CriticalPoints& cp,
                        double step) {
  cfg.validate();
  RegionSpec spec(cfg);
  auto field = [&](Complex z) -> double {
    return psi_n(e, cfg.lambda, z).imag();
  };
  TraceConfig tc;
  tc.step = step;
  auto stop = [&](Complex z) { return std::abs(z - cp.v) <= 1.5 * step; };
  TracedCurve curve = trace_level_curve(field, cp.u, {0.0, -1.0}, stop, tc);
  curve.points.push_back(cp.v);
  curve.end_anchor = cp.v;

  const double slack = 1e-7;
  for (size_t i = 1; i + 1 < curve.points.size(); ++i) {
    Complex z = curve.points[i];
    if (std::abs(field(z)) > tc.field_tol)
      throw DomainViolationError("gamma point off the level set", z);
    if (!spec.in_ADE(z, slack))
      throw DomainViolationError("gamma left the region A+D+E", z);
  }
  return curve;
}

PreimageCount count_preimages(const RExpr& e, double lambda, Complex omega,
                              const CriticalPoints& cp, const TracedCurve& gamma, double R,
                              const QuadratureConfig& qcfg) {
  if (!(R > 100.0)) throw InvalidConfigError("count_preimages requires R > 100");
  if (!(omega.imag() > 0)) throw InvalidConfigError("omega must lie in the upper half plane");
  const double pole = -1.0 / std::sqrt(lambda);
  const double u = cp.u.real(), v = cp.v.real();

  std::vector<Piece> pieces;
  pieces.push_back(Segment{{R, 0}, {v, 0}});
  // gamma reversed: v -> u through the lower half plane
  for (size_t i = gamma.points.size(); i-- > 1;) {
    Complex a = gamma.points[i], b = gamma.points[i - 1];
    if (std::abs(a - b) > 0.0) pieces.push_back(Segment{a, b});
  }
  pieces.push_back(Segment{{u, 0}, {pole + 1.0 / R, 0}});
  pieces.push_back(Arc{{pole, 0}, 1.0 / R, 0.0, -kPi});
  pieces.push_back(Segment{{pole - 1.0 / R, 0}, {-R, 0}});
  pieces.push_back(Arc{{0, 0}, R, -kPi, 0.0});
  Contour path(std::move(pieces));

  auto f = [&](Complex z) -> Complex {
    try {
      return psi_n_prime(e, lambda, z) / (psi_n(e, lambda, z) - omega);
    } catch (const PoleError&) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      return Complex{inf, inf};
    }
  };
  Complex raw = integrate_contour(f, path, qcfg);
  PreimageCount pc;
  pc.count = std::lround((raw / (2.0 * kPi * kI)).real());
  pc.residual = std::abs(raw - 2.0 * kPi * kI * static_cast<double>(pc.count));
  if (pc.residual > 1e-3)
    throw RefinementFailure("preimage count inconclusive (residual " +
                                fmt_double(pc.residual) + ")",
                            raw, pc.residual);
  return pc;
}

std::string LemmaReport::to_json() const {
  nlohmann::json j;
  j["i"] = {{"pass", asymptotic_pass}, {"C", fitted_C}};
  j["ii"] = {{"pass", analytic_pass},
             {"max_coeff_dev", max_coeff_dev},
             {"max_reconstruction_err", max_reconstruction_err}};
  if (!note.empty()) j["note"] = note;
  j["pass"] = pass();
  return j.dump(2) + "\n";
}

LemmaReport verify_lemma(const RExpr& e, const InversionConfig& icfg) {
  LemmaReport rep;

  // (i) |z G(z) - 1| must decay like C/|z| along rays in the upper half plane
  try {
    bool ok = true;
    double cfit = 0.0;
    for (double frac : {0.2, 0.35, 0.5, 0.65, 0.8}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double r : {1e2, 1e3, 1e4}) {
        Complex z = r * std::polar(1.0, frac * kPi);
        Complex w = invert_k(e, z, icfg);
        double err = std::abs(z * w - 1.0);
        if (!(err <= 0.2 * prev + 1e-12)) ok = false;
        cfit = std::max(cfit, err * r);
        prev = err;
      }
    }
    rep.asymptotic_pass = ok;
    rep.fitted_C = cfit;
  } catch (const NumericError& err) {
    rep.asymptotic_pass = false;
    rep.note = err.what();
  }

  // (ii) analytic extension of R to a neighborhood of zero: Cauchy
  // coefficients must agree across two radii, and the truncated series must
  // reproduce R well inside the smaller circle
  try {
    double pole_dist = e.min_pole_distance(Complex{0, 0});
    if (pole_dist < 1e-12) {
      rep.analytic_pass = false;
      rep.note = "R is singular at 0";
    } else {
      double rho1 = std::min(0.5, 0.5 * pole_dist);
      double rho2 = 0.5 * rho1;
      const int n_max = 12;
      auto k1 = r_taylor_coefficients(e, n_max, {}, rho1);
      auto k2 = r_taylor_coefficients(e, n_max, {}, rho2);
      double dev = 0.0;
      for (int m = 0; m < n_max; ++m)
        dev = std::max(dev, std::abs(k1[m] - k2[m]) / std::max(1.0, std::abs(k1[m])));
      rep.max_coeff_dev = dev;

      double rec = 0.0;
      double rho3 = 0.25 * rho2;
      for (int j = 0; j < 16; ++j) {
        Complex z = rho3 * std::polar(1.0, j * (2.0 * kPi / 16.0) + 0.1);
        Complex series{0, 0}, p{1, 0};
        for (int m = 0; m < n_max; ++m) {
          series += k2[m] * p;
          p *= z;
        }
        Complex truth = e.eval(z);
        rec = std::max(rec, std::abs(series - truth) / std::max(1.0, std::abs(truth)));
      }
      rep.max_reconstruction_err = rec;
      rep.analytic_pass = dev <= 1e-8 && rec <= 1e-6;
    }
  } catch (const NumericError& err) {
    rep.analytic_pass = false;
    rep.note = err.what();
  }
  return rep;
}

SpectralMeasure construct_measure(const RExpr& e, const RegionConfig& cfg,
                                  const InversionConfig& icfg, const BuildConfig& bcfg,
                                  uint64_t seed) {
  ConditionReport rep = check_conditions(e, cfg, seed);
  if (!rep.all_pass()) {
    std::string bad;
    for (int i = 0; i < ConditionReport::kCount; ++i)
      if (!rep.results[i].pass()) bad += std::string(bad.empty() ? "" : ",") +
                                         ConditionReport::kNames[i];
    throw GateFailure("check_conditions", "conditions failed: " + bad + "\n" + rep.to_json());
  }

  CriticalPoints cp;
  try {
    cp = find_critical_points(e, cfg);
  } catch (const NumericError& err) {
    throw GateFailure("find_critical_points", err.what());
  }

  TracedCurve gamma;
  try {
    gamma = trace_gamma(e, cfg, cp);
  } catch (const NumericError& err) {
    throw GateFailure("trace_gamma", err.what());
  }

  try {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.1, 2.1);
    for (int k = 0; k < 20; ++k) {
      Complex omega{ux(rng), uy(rng)};
      PreimageCount pc = count_preimages(e, cfg.lambda, omega, cp, gamma, 200.0);
      if (pc.count != 1)
        throw GateFailure("count_preimages", "count " + std::to_string(pc.count) + " for omega " +
                                                 fmt_complex(omega));
    }
  } catch (const GateFailure&) {
    throw;
  } catch (const NumericError& err) {
    throw GateFailure("count_preimages", err.what());
  }

  LemmaReport lems = verify_lemma(e, icfg);
  if (!lems.pass()) throw GateFailure("verify_lemma", lems.to_json());

  try {
    return build_measure(e, icfg, bcfg);
  } catch (const NumericError& err) {
    throw GateFailure("build_measure", err.what());
  }
}

}  // namespace freeconv

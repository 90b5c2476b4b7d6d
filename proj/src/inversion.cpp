#include "freeconv/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "freeconv/newton.hpp"
#include "freeconv/quadrature.hpp"

namespace freeconv {

void InversionConfig::validate() const {
  if (!(newton_tol > 0)) throw InvalidConfigError("newton_tol must be > 0");
  if (ladder.empty()) throw InvalidConfigError("ladder must be non-empty");
  for (size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0)) throw InvalidConfigError("ladder offsets must be > 0");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw InvalidConfigError("ladder must be strictly decreasing");
  }
  if (extrapolation_order < 0) throw InvalidConfigError("extrapolation order must be >= 0");
}

double InversionConfig::ladder_scale(double x) const {
  if (edge_refs.empty()) return 1.0;
  double d = std::numeric_limits<double>::infinity();
  for (double r : edge_refs) d = std::min(d, std::abs(x - r));
  double s = edge_frac * d / ladder.front();
  // floor on the scale, not per rung, so the rungs never collapse together
  double s_min = ladder_floor / ladder.back();
  return std::clamp(s, s_min, 1.0);
}

namespace {

Complex solve_k(const RExpr& e, Complex z, Complex seed, double tol, int max_iter) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // iterates that land on a pole of K read as non-finite so damping kicks in
  auto f = [&](Complex w) -> Complex {
    try {
      return eval_k(e, w) - z;
    } catch (const PoleError&) {
      return Complex{inf, inf};
    }
  };
  auto fp = [&](Complex w) -> Complex {
    try {
      return eval_k_prime(e, w);
    } catch (const PoleError&) {
      return Complex{inf, inf};
    }
  };
  Complex w = newton_solve(f, fp, seed, tol, max_iter);
  // The residual criterion leaves w with slack tol/|K'|, which ruins Im w
  // where |w| is large and K' tiny (next to square-root edges). Polish with
  // undamped steps until the step size (an a-posteriori error bound)
  // converges or stalls at the rounding floor; anything else is rejected so
  // the caller can fall back to the homotopy path.
  double prev_step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 40; ++i) {
    Complex kp = fp(w);
    if (!is_finite(kp) || std::abs(kp) == 0.0) break;
    Complex dw = f(w) / kp;
    if (!is_finite(dw)) break;
    w -= dw;
    double step = std::abs(dw), scale = 1.0 + std::abs(w);
    if (step <= 1e-13 * scale) return w;
    // Steps that stop shrinking have hit the rounding floor of f/K' (K'
    // degenerates next to support edges); the root is then known to ~step,
    // which the sanity cap keeps far from any still-converging garbage.
    if (step <= 1e-6 * scale && step >= 0.6 * prev_step) return w;
    prev_step = step;
  }
  throw NoRootError("solve_k: no step-size convergence", {seed, w});
}

}  // namespace

Complex invert_k(const RExpr& e, Complex z, const InversionConfig& cfg,
                 std::optional<Complex> seed) {
  if (!(z.imag() > 0)) throw InversionError("invert_k requires Im z > 0", z);
  cfg.validate();
  const double tol = cfg.newton_tol * (1.0 + std::abs(z));

  // A genuine wrong-branch solution mirrors Im G at O(|Im G|); noise around
  // the boundary value (true Im w down at -1e-17 next to a support edge) may
  // poke above zero by at most the polish noise cap and is clamped back.
  auto accept = [&](Complex& w) -> bool {
    if (!is_finite(w) || std::abs(eval_k(e, w) - z) > tol) return false;
    if (w.imag() >= 1e-6 * (1.0 + std::abs(w))) return false;
    if (!(w.imag() < 0)) w = Complex{w.real(), -1e-300};
    return true;
  };

  Complex w0 = seed.value_or(1.0 / z);
  try {
    Complex w = solve_k(e, z, w0, tol, cfg.max_iter);
    if (accept(w)) return w;
  } catch (const NoRootError&) {
    // fall through to homotopy
  }

  // Homotopy in Im z from far above the real axis down to the target; each
  // stage is Newton-seeded with the previous solution, the first with the
  // asymptotic value 1/z.
  const double y_target = z.imag();
  double y = std::max({4.0, 2.0 * std::abs(z), 4.0 * y_target});
  Complex zh{z.real(), y};
  Complex w = 1.0 / zh;
  while (true) {
    zh = Complex{z.real(), y};
    double stage_tol = cfg.newton_tol * (1.0 + std::abs(zh));
    try {
      w = solve_k(e, zh, w, stage_tol, cfg.max_iter);
    } catch (const NoRootError&) {
      throw InversionError("invert_k: homotopy Newton failed at Im z = " + fmt_double(y), z);
    }
    if (y <= y_target) break;
    y = std::max(y_target, 0.5 * y);
  }
  if (!accept(w)) {
    if (is_finite(w) && w.imag() >= 1e-6 * (1.0 + std::abs(w)))
      throw WrongBranchError("invert_k: solution escaped the lower half plane", z);
    throw InversionError("invert_k: residual above tolerance after homotopy", z);
  }
  return w;
}

double stieltjes_density(const RExpr& e, double x, const InversionConfig& cfg) {
  cfg.validate();
  const double s = cfg.ladder_scale(x);
  std::vector<double> ys, vs;
  ys.reserve(cfg.ladder.size());
  vs.reserve(cfg.ladder.size());
  std::optional<Complex> seed;
  for (double y0 : cfg.ladder) {
    double y = s * y0;
    Complex w = invert_k(e, Complex{x, y}, cfg, seed);
    seed = w;
    ys.push_back(y);
    vs.push_back(-w.imag() / kPi);
  }
  size_t use = std::min(ys.size(), static_cast<size_t>(cfg.extrapolation_order) + 1);
  std::span<const double> yt(ys.data() + (ys.size() - use), use);
  std::span<const double> vt(vs.data() + (vs.size() - use), use);
  double d = extrapolate_to_zero(yt, vt);
  if (d < -1e-9)
    throw NegativeDensityError("extrapolated density is negative at x = " + fmt_double(x), x, d);
  return std::max(d, 0.0);
}

std::vector<double> density_grid(const RExpr& e, std::span<const double> xs,
                                 const InversionConfig& cfg) {
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw InvalidConfigError("density_grid: grid must be sorted");
  std::vector<double> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = stieltjes_density(e, xs[i], cfg);
  return out;
}

double extract_atom(const RExpr& e, double x0, const InversionConfig& cfg) {
  cfg.validate();
  std::vector<double> ys, vs;
  std::optional<Complex> seed;
  for (double y : cfg.ladder) {
    Complex w = invert_k(e, Complex{x0, y}, cfg, seed);
    seed = w;
    ys.push_back(y);
    vs.push_back(-y * w.imag());
  }
  size_t use = std::min(ys.size(), static_cast<size_t>(cfg.extrapolation_order) + 1);
  std::span<const double> yt(ys.data() + (ys.size() - use), use);
  std::span<const double> vt(vs.data() + (vs.size() - use), use);
  double mass = extrapolate_to_zero(yt, vt);
  if (mass < 1e-6) return 0.0;
  // A genuine atom gives -y Im G = m + O(y^2), so dropping the coarsest rung
  // barely moves the extrapolant. Square-root-type boundary behavior (no
  // atom) has no stable limit and gets rejected here.
  if (use > 2) {
    double drop = extrapolate_to_zero(yt.subspan(1), vt.subspan(1));
    if (std::abs(mass - drop) > std::max(1e-6, 0.05 * mass)) return 0.0;
  }
  return mass;
}

}  // namespace freeconv

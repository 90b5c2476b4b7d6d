#include "freeconv/trace.hpp"

#include <algorithm>
#include <cmath>

namespace freeconv {

Complex field_gradient(const RealField& field, Complex z, double grad_h) {
  const double h = grad_h * (1.0 + std::abs(z));
  double gx = (field(z + Complex{h, 0}) - field(z - Complex{h, 0})) / (2.0 * h);
  double gy = (field(z + Complex{0, h}) - field(z - Complex{0, h})) / (2.0 * h);
  return {gx, gy};
}

namespace {

// Newton projection onto field = 0 along the local gradient direction.
// Stays within max_move of the entry point (so a wandering iteration cannot
// hop to a different branch of the level set). Returns the number of
// iterations used, or -1 on failure.
int correct(const RealField& field, const TraceConfig& cfg, Complex& z, double max_move) {
  const Complex entry = z;
  for (int it = 0; it < 16; ++it) {
    double f = field(z);
    if (!is_finite(f)) return -1;
    Complex g = field_gradient(field, z, cfg.grad_h);
    double g2 = std::norm(g);
    if (!(g2 > 0) || !is_finite(g)) return -1;
    double target = std::min(cfg.field_tol, std::max(std::sqrt(g2) * cfg.pos_tol, 1e-14));
    if (std::abs(f) <= target) return it;
    z -= f * g / g2;
    if (std::abs(z - entry) > 1.5 * max_move) return -1;
  }
  // accept if within the hard cap even when the tight target was not reached
  return std::abs(field(z)) <= cfg.field_tol ? 16 : -1;
}

}  // namespace

TracedCurve trace_level_curve(const RealField& field, Complex start, Complex dir0,
                              const StopPredicate& stop_pred, const TraceConfig& cfg) {
  TracedCurve curve;
  curve.start_anchor = start;
  curve.step = cfg.step;
  curve.points.push_back(start);

  double d0 = std::abs(dir0);
  if (!(d0 > 0)) throw InvalidConfigError("trace_level_curve: zero initial direction");
  Complex dir = dir0 / d0;

  const double min_step = cfg.step / 1024.0;
  double step = cfg.step;
  Complex z = start;

  while (curve.points.size() < cfg.max_points) {
    Complex cand = z + step * dir;
    int used = correct(field, cfg, cand, step);
    if (used >= 0 && std::abs(cand - z) > 2.0 * step) used = -1;  // spacing invariant
    if (used < 0) {
      if (step * 0.5 >= min_step) {
        step *= 0.5;
        continue;
      }
      throw TraceFailure("trace_level_curve: corrector failed near " + fmt_complex(z),
                         curve.points);
    }

    // tangent at the corrected point; keep direction of travel
    Complex g = field_gradient(field, cand, cfg.grad_h);
    double gn = std::abs(g);
    Complex tangent = gn > 0 ? Complex{g.imag(), -g.real()} / gn : dir;
    if (tangent.real() * dir.real() + tangent.imag() * dir.imag() < 0.0) tangent = -tangent;

    // curvature clamp: sharp turns or slow correctors shrink the step
    double turn = std::abs(std::arg(tangent / dir));
    if (turn > 0.25 && step * 0.5 >= min_step) {
      step *= 0.5;
      continue;
    }

    z = cand;
    dir = tangent;
    curve.points.push_back(z);
    curve.end_anchor = z;
    if (stop_pred(z)) return curve;

    if (turn < 0.06 && used <= 2) step = std::min(cfg.step, step * 1.3);
  }
  throw TraceFailure("trace_level_curve: point budget exhausted", curve.points);
}

}  // namespace freeconv

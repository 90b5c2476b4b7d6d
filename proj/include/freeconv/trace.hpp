#pragma once

#include <functional>
#include <vector>

#include "freeconv/errors.hpp"
#include "freeconv/types.hpp"

namespace freeconv {

using RealField = std::function<double(Complex)>;
using StopPredicate = std::function<bool(Complex)>;

struct TraceConfig {
  double step = 2e-3;        // predictor arclength step (also the max step)
  double field_tol = 1e-9;   // cap on |field| at accepted points
  double pos_tol = 1e-7;     // positional accuracy target: |field| <= |grad|*pos_tol
  size_t max_points = 200000;
  double grad_h = 1e-6;      // central-difference scale: h = grad_h*(1+|z|)
};

struct TracedCurve {
  std::vector<Complex> points;
  Complex start_anchor{};
  Complex end_anchor{};
  double step = 0.0;
};

// Predictor-corrector tracing of field = 0. The predictor follows the tangent
// (perpendicular to the central-difference gradient), the corrector projects
// back onto the level set by 1-D Newton along the gradient. `start` must lie
// on the level set, or be an anchor (e.g. a critical point) from which the
// curve emanates in direction `dir0`. Terminates when stop_pred holds; throws
// TraceFailure (with the partial curve) on corrector failure, step collapse
// below step/1024, or point-budget exhaustion.
TracedCurve trace_level_curve(const RealField& field, Complex start, Complex dir0,
                              const StopPredicate& stop_pred, const TraceConfig& cfg = {});

// Central-difference gradient of a real field, packed as gx + i*gy.
Complex field_gradient(const RealField& field, Complex z, double grad_h = 1e-6);

}  // namespace freeconv

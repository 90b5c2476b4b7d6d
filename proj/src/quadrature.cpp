#include "freeconv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace freeconv {

namespace {

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[5] = {0.14887433898163121, 0.43339539412924719,
                               0.67940956829902441, 0.86506336668898451,
                               0.97390652851717172};
constexpr double kGlWeight[5] = {0.29552422471475287, 0.26926671930999635,
                                 0.21908636251598204, 0.14945134915058059,
                                 0.066671344308688138};

struct Param {
  // map [0,1] -> points on a piece
  const Piece* piece;
  Complex at(double t) const {
    if (auto* s = std::get_if<Segment>(piece)) return s->at(t);
    return std::get<Arc>(*piece).at(t);
  }
  Complex deriv(double t) const {
    if (auto* s = std::get_if<Segment>(piece)) return s->deriv();
    return std::get<Arc>(*piece).deriv(t);
  }
};

Complex gl10(const ComplexFn& f, const Param& par, double t0, double t1) {
  const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  Complex acc{0.0, 0.0};
  for (int i = 0; i < 5; ++i) {
    double tp = mid + half * kGlNode[i];
    double tm = mid - half * kGlNode[i];
    acc += kGlWeight[i] * (f(par.at(tp)) * par.deriv(tp) + f(par.at(tm)) * par.deriv(tm));
  }
  return half * acc;
}

Complex adaptive_panel(const ComplexFn& f, const Param& par, double t0, double t1,
                       double tol, int depth_left, double* worst_bound) {
  Complex whole = gl10(f, par, t0, t1);
  double tm = 0.5 * (t0 + t1);
  Complex left = gl10(f, par, t0, tm);
  Complex right = gl10(f, par, tm, t1);
  double err = std::abs(whole - (left + right));
  // below the rounding floor of the panel values further splitting only
  // chases noise
  double floor = 7e-16 * (std::abs(whole) + std::abs(left) + std::abs(right));
  double accept = std::max(tol, floor);
  if (err <= accept || depth_left <= 0) {
    if (err > accept) *worst_bound = std::max(*worst_bound, err);
    return left + right;
  }
  return adaptive_panel(f, par, t0, tm, 0.5 * tol, depth_left - 1, worst_bound) +
         adaptive_panel(f, par, tm, t1, 0.5 * tol, depth_left - 1, worst_bound);
}

Complex pairwise_sum(std::vector<Complex>& v) {
  if (v.empty()) return {0.0, 0.0};
  size_t n = v.size();
  while (n > 1) {
    size_t half = (n + 1) / 2;
    for (size_t i = 0; i < n / 2; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2) v[n / 2] = v[n - 1];
    n = half;
  }
  return v[0];
}

}  // namespace

Complex integrate_contour(const ComplexFn& f, const Contour& path,
                          const QuadratureConfig& cfg) {
  cfg.validate();
  if (path.empty()) return {0.0, 0.0};

  const auto& pieces = path.pieces();
  const double piece_tol = cfg.abs_tol / static_cast<double>(pieces.size());
  double worst_bound = 0.0;
  std::vector<Complex> vals;
  vals.reserve(pieces.size() * cfg.panels_per_piece);

  for (const auto& pc : pieces) {
    Param par{&pc};
    const double panel_tol = piece_tol / cfg.panels_per_piece;
    for (int k = 0; k < cfg.panels_per_piece; ++k) {
      double t0 = static_cast<double>(k) / cfg.panels_per_piece;
      double t1 = static_cast<double>(k + 1) / cfg.panels_per_piece;
      vals.push_back(
          adaptive_panel(f, par, t0, t1, panel_tol, cfg.max_refinements, &worst_bound));
    }
  }
  Complex result = pairwise_sum(vals);
  if (worst_bound > 0.0)
    throw RefinementFailure("contour quadrature did not converge (bound " +
                                fmt_double(worst_bound) + ")",
                            result, worst_bound);
  return result;
}

double extrapolate_to_zero(std::span<const double> xs, std::span<const double> vs) {
  const size_t n = xs.size();
  if (n == 0 || vs.size() != n) throw InvalidConfigError("extrapolation needs matching points");
  std::vector<double> t(vs.begin(), vs.end());
  // Neville tableau evaluated at x = 0
  for (size_t level = 1; level < n; ++level) {
    for (size_t i = 0; i + level < n; ++i) {
      double xi = xs[i], xj = xs[i + level];
      t[i] = ((0.0 - xj) * t[i] - (0.0 - xi) * t[i + 1]) / (xi - xj);
    }
  }
  return t[0];
}

}  // namespace freeconv

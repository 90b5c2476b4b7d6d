#pragma once

#include <functional>

#include "freeconv/contour.hpp"

namespace freeconv {

using ComplexFn = std::function<Complex(Complex)>;

// Adaptive composite Gauss-Legendre quadrature of f along the path.
// Each piece starts from cfg.panels_per_piece panels; panels whose bisection
// estimate exceeds their tolerance share are split dyadically up to
// cfg.max_refinements levels, after which RefinementFailure is thrown with the
// last estimate and error bound. Piece values are combined by pairwise
// summation so the result is bit-stable for a fixed panel layout.
Complex integrate_contour(const ComplexFn& f, const Contour& path,
                          const QuadratureConfig& cfg = {});

// Polynomial (Neville) extrapolation of (x_i, v_i) to x = 0. Uses all points;
// degree = points - 1.
double extrapolate_to_zero(std::span<const double> xs, std::span<const double> vs);

}  // namespace freeconv

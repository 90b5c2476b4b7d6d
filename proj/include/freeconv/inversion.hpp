#pragma once

#include <optional>
#include <span>
#include <vector>

#include "freeconv/rexpr.hpp"

namespace freeconv {

struct InversionConfig {
  double newton_tol = 1e-12;  // on |K(w) - z|, scaled by (1 + |z|)
  int max_iter = 60;
  // Stieltjes extrapolation ladder: decreasing imaginary offsets, extrapolated
  // to y -> 0+ by a polynomial of the given degree.
  std::vector<double> ladder = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  int extrapolation_order = 3;
  // Optional edge-aware scaling: with reference points set (support edges,
  // atoms), the ladder at abscissa x is shrunk by min(1, edge_frac*d/ladder[0])
  // where d is the distance from x to the nearest reference. Keeps the
  // extrapolation inside its convergence disk next to square-root edges.
  std::vector<double> edge_refs = {};
  double edge_frac = 0.2;
  double ladder_floor = 1e-17;

  void validate() const;
  double ladder_scale(double x) const;

  // Deeper ladder with degree-5 extrapolation; resolves densities to ~1e-7
  // down to 0.05 from a square-root edge (the default ladder stops near 1e-5
  // there).
  static InversionConfig accurate() {
    InversionConfig c;
    c.ladder = {8e-3, 4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4};
    c.extrapolation_order = 5;
    return c;
  }
};

// Cauchy transform by numerical inversion of K: returns w = G(z) with
// Im w < 0 solving K(w) = z, Newton-seeded at 1/z and continued along a
// homotopy in Im z from above when the direct solve fails or leaves the lower
// half plane. Throws InversionError / WrongBranchError.
Complex invert_k(const RExpr& e, Complex z, const InversionConfig& cfg,
                 std::optional<Complex> seed = std::nullopt);

// Density -(1/pi) Im G(x + iy) extrapolated along the ladder to y -> 0+.
// Values in [-1e-9, 0) are clamped to 0; anything more negative throws
// NegativeDensityError (the expression is not a valid R-transform at this
// perturbation size).
double stieltjes_density(const RExpr& e, double x, const InversionConfig& cfg);

std::vector<double> density_grid(const RExpr& e, std::span<const double> xs,
                                 const InversionConfig& cfg);

// Atom mass at x0: limit of -y Im G(x0 + iy) along the ladder; extrapolated
// values below 1e-6 are reported as 0.
double extract_atom(const RExpr& e, double x0, const InversionConfig& cfg);

}  // namespace freeconv

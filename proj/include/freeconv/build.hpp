#pragma once

#include "freeconv/inversion.hpp"
#include "freeconv/measure.hpp"

namespace freeconv {

struct BuildConfig {
  int grid_points = 20001;
  double mass_tol = 1e-6;
  double edge_threshold = 1e-7;  // extrapolated-density level defining support edges
  bool edge_aware_ladder = true;  // shrink the ladder near edges and atoms
  std::vector<double> atom_candidates = {};  // tried in addition to the translate offset
};

// Realizes a measure from its R-transform: extracts atoms, locates the
// support by bisection of the extrapolated density against edge_threshold,
// fills a clustered grid, and validates mass and positivity. The atom
// contribution to Im G is removed analytically before extrapolation so the
// continuous density is clean next to point masses.
SpectralMeasure build_measure(const RExpr& e, const InversionConfig& icfg = {},
                              const BuildConfig& bcfg = {});

// Continuous density at x with the atom tails subtracted; used by
// build_measure and exposed for pointwise comparisons. Values in (-neg_tol, 0)
// clamp to 0; build_measure passes its edge threshold since values below that
// level define "outside the support" anyway.
double continuous_density(const RExpr& e, double x, const std::vector<Atom>& atoms,
                          const InversionConfig& cfg, double neg_tol = 1e-9);

}  // namespace freeconv

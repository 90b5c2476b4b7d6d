#pragma once

#include <string>
#include <vector>

#include "freeconv/errors.hpp"
#include "freeconv/types.hpp"

namespace freeconv {

struct Atom {
  double x;
  double mass;
};

struct GridPoint {
  double x;
  double density;
};

// Compactly supported probability measure: point atoms plus a continuous
// density sampled on an ordered grid over the support interval. Total mass
// (atom masses + trapezoid integral of the grid) must be 1 within mass_tol.
struct SpectralMeasure {
  std::vector<Atom> atoms;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::vector<GridPoint> grid;
  double mass_tol = 1e-6;

  double continuous_mass() const;           // trapezoid integral of the grid
  double total_mass() const;
  double moment(int k) const;               // atoms + trapezoid of x^k * density
  double cdf(double x) const;               // atoms counted at x - 1e-9
  void validate() const;                    // mass window, nonnegative density

  std::string to_csv() const;               // header "x,density"
  std::string to_json_sidecar() const;      // {atoms, support, mass_tol}
  void write(const std::string& csv_path) const;  // csv + csv_path + ".json"
  static SpectralMeasure read(const std::string& csv_path);
};

// First n_max moments m_1..m_n of the measure (n_max <= 12).
std::vector<double> measure_moments(const SpectralMeasure& m, int n_max);

// Grid of n points on [a, b], open at both ends, clustered towards the
// endpoints with quartic contact (the C3 smoothstep). Keeps trapezoid
// integrals of square-root edges (and their harmonic extensions) accurate.
std::vector<double> clustered_grid(double a, double b, int n);

}  // namespace freeconv

#include "freeconv/mp.hpp"

#include <cmath>

namespace freeconv {

double mp_density(double lambda, double x) {
  double disc = 4.0 * lambda - (x - 1.0 - lambda) * (x - 1.0 - lambda);
  if (disc <= 0.0 || x == 0.0) return 0.0;
  return std::sqrt(disc) / (2.0 * kPi * x);
}

void mp_support(double lambda, double* lo, double* hi) {
  double s = std::sqrt(lambda);
  *lo = (1.0 - s) * (1.0 - s);
  *hi = (1.0 + s) * (1.0 + s);
}

SpectralMeasure mp_closed_form(double lambda, int grid_points) {
  if (!(lambda > 0)) throw InvalidConfigError("mp_closed_form: lambda must be > 0");
  SpectralMeasure m;
  mp_support(lambda, &m.support_lo, &m.support_hi);
  if (lambda < 1.0) m.atoms.push_back({0.0, 1.0 - lambda});
  auto xs = clustered_grid(m.support_lo, m.support_hi, grid_points);
  m.grid.reserve(xs.size());
  for (double x : xs) m.grid.push_back({x, mp_density(lambda, x)});
  m.mass_tol = 1e-6;
  m.validate();
  return m;
}

Complex mp_cauchy(double lambda, Complex z) {
  // stable quadratic roots of z*G^2 - (z+1-lambda)*G + 1 = 0
  Complex a = z, b = -(z + 1.0 - lambda), c{1.0, 0.0};
  Complex sq = std::sqrt(b * b - 4.0 * a * c);
  if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
  Complex q = -0.5 * (b + sq);
  Complex g1 = q / a, g2 = c / q;
  // physical branch: Im G < 0 for Im z > 0, tie-broken by z*G -> 1
  bool ok1 = g1.imag() < 0, ok2 = g2.imag() < 0;
  if (ok1 != ok2) return ok1 ? g1 : g2;
  return std::abs(z * g1 - 1.0) <= std::abs(z * g2 - 1.0) ? g1 : g2;
}

}  // namespace freeconv

#include "freeconv/cumulants.hpp"

#include <cmath>

#include "freeconv/quadrature.hpp"

namespace freeconv {

std::vector<double> cumulants_to_moments(const CumulantSeq& kappa) {
  const int N = static_cast<int>(kappa.size());
  std::vector<double> m(N + 1, 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    // conv[k][s] = sum over compositions of s into k parts of prod m_{i_j},
    // built incrementally from moments m_0..m_{n-1}
    std::vector<double> conv(n, 0.0);  // k = 1 row: conv[s] = m_s
    for (int s = 0; s < n; ++s) conv[s] = m[s];
    double total = 0.0;
    for (int k = 1; k <= n; ++k) {
      if (n - k >= 0) total += kappa[k - 1] * conv[n - k];
      // advance to k+1 parts
      if (k < n) {
        std::vector<double> next(n, 0.0);
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int i = 0; i <= s; ++i) acc += conv[i] * m[s - i];
          next[s] = acc;
        }
        conv.swap(next);
      }
    }
    m[n] = total;
  }
  return std::vector<double>(m.begin() + 1, m.end());
}

CumulantSeq r_taylor_coefficients(const RExpr& e, int n_max, const QuadratureConfig& cfg,
                                  double rho) {
  double pole_dist = e.min_pole_distance(Complex{0.0, 0.0});
  if (pole_dist < 1e-12)
    throw PoleError("r_taylor_coefficients: R has a pole at 0", Complex{0.0, 0.0});
  // rho <= 0 asks for the automatic radius. The circle must sit well inside
  // the pole-free disk but not so small that 1/z^{m+1} drowns the integral in
  // rounding noise (the integrand scales like rho^-(m+1)).
  if (!(rho > 0) || !(rho < pole_dist)) rho = std::min(0.5, 0.5 * pole_dist);
  Contour circle = Contour::circle(Complex{0.0, 0.0}, rho);
  CumulantSeq kappa;
  kappa.reserve(n_max);
  for (int m = 0; m < n_max; ++m) {
    auto f = [&](Complex z) { return e.eval(z) / std::pow(z, m + 1); };
    Complex c = integrate_contour(f, circle, cfg) / (2.0 * kPi * kI);
    if (std::abs(c.imag()) > 1e-8)
      throw SymmetryViolationError("r_taylor_coefficients: imaginary residue " +
                                   fmt_double(c.imag()) + " at order " + std::to_string(m));
    kappa.push_back(c.real());
  }
  return kappa;
}

}  // namespace freeconv

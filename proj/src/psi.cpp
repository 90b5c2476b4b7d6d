#include "freeconv/psi.hpp"

#include <cmath>

namespace freeconv {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw InvalidConfigError("psi requires lambda in (0,1), got " + fmt_double(lambda));
}

void require_off_poles(double lambda, Complex z) {
  double s = std::sqrt(lambda);
  if (std::abs(z + 1.0 / s) < 1e-14 || std::abs(z + s) < 1e-14)
    throw PoleError("psi evaluated at a pole", z);
}

}  // namespace

Complex psi_closed_form(double lambda, Complex z) {
  require_lambda(lambda);
  require_off_poles(lambda, z);
  double s = std::sqrt(lambda), c = (1.0 - lambda) * (1.0 - lambda);
  return z * c / ((s * z + 1.0) * (z + s));
}

Complex psi_prime_closed_form(double lambda, Complex z) {
  require_lambda(lambda);
  require_off_poles(lambda, z);
  double s = std::sqrt(lambda), c = (1.0 - lambda) * (1.0 - lambda);
  Complex d1 = s * z + 1.0, d2 = z + s;
  return c * s * (1.0 - z * z) / (d1 * d1 * d2 * d2);
}

double im_psi_factored(double lambda, Complex z) {
  require_lambda(lambda);
  require_off_poles(lambda, z);
  double s = std::sqrt(lambda), c = (1.0 - lambda) * (1.0 - lambda);
  double n1 = std::norm(s * z + 1.0), n2 = std::norm(z + s);
  return c * s * (1.0 - std::norm(z)) * z.imag() / (n1 * n2);
}

std::pair<Complex, Complex> psi_preimage_roots(double lambda, Complex Z) {
  require_lambda(lambda);
  if (std::abs(Z) < 1e-300) throw InvalidConfigError("preimage quadratic needs Z != 0");
  double s = std::sqrt(lambda), c = (1.0 - lambda) * (1.0 - lambda);
  Complex b = 1.0 / s + s - c / (Z * s);
  Complex sq = std::sqrt(b * b - 4.0);
  if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
  Complex q = -0.5 * (b + sq);
  return {q, 1.0 / q};  // product of the roots is one
}

Complex psi_n(const RExpr& e, double lambda, Complex z) {
  require_lambda(lambda);
  return eval_k(e, affine_map(lambda, z));
}

Complex psi_n_prime(const RExpr& e, double lambda, Complex z) {
  require_lambda(lambda);
  return affine_scale(lambda) * eval_k_prime(e, affine_map(lambda, z));
}

Complex psi_n_second(const RExpr& e, double lambda, Complex z) {
  require_lambda(lambda);
  double a = affine_scale(lambda);
  return a * a * eval_k_second(e, affine_map(lambda, z));
}

}  // namespace freeconv

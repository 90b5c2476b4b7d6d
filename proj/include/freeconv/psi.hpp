#pragma once

#include <utility>

#include "freeconv/rexpr.hpp"

namespace freeconv {

// Rescaled K-transform psi(z) = K(sqrt(lambda)/(1-lambda) z + 1/(1-lambda))
// of the free Poisson law, and its closed forms. Requires lambda in (0,1).

inline double affine_scale(double lambda) { return std::sqrt(lambda) / (1.0 - lambda); }
inline double affine_shift(double lambda) { return 1.0 / (1.0 - lambda); }
inline Complex affine_map(double lambda, Complex z) {
  return affine_scale(lambda) * z + affine_shift(lambda);
}

// psi(z) = z (1-lambda)^2 / ((sqrt(lambda) z + 1)(z + sqrt(lambda)))
Complex psi_closed_form(double lambda, Complex z);

// psi'(z) = (1-lambda)^2 sqrt(lambda) (1 - z^2) / ((sqrt(lambda) z + 1)^2 (z + sqrt(lambda))^2);
// vanishes exactly at +1 and -1. (Note the numerator sign: this is the
// derivative of the closed form above, which central differences confirm.)
Complex psi_prime_closed_form(double lambda, Complex z);

// Im psi(z) = (1-lambda)^2 sqrt(lambda) (1-|z|^2) Im z / (|sqrt(lambda) z + 1|^2 |z + sqrt(lambda)|^2),
// so psi(z) is real exactly when z is real or |z| = 1.
double im_psi_factored(double lambda, Complex z);

// The two preimages of Z != 0 under psi solve
// X^2 + (1/sqrt(lambda) + sqrt(lambda) - (1-lambda)^2/(Z sqrt(lambda))) X + 1 = 0;
// their product is one.
std::pair<Complex, Complex> psi_preimage_roots(double lambda, Complex Z);

// Perturbed rescaled transform psi_n(z) = K_n(affine(z)) where K_n = 1/w + R(w)
// for the full expression (free Poisson base plus perturbation).
Complex psi_n(const RExpr& e, double lambda, Complex z);
Complex psi_n_prime(const RExpr& e, double lambda, Complex z);
Complex psi_n_second(const RExpr& e, double lambda, Complex z);

}  // namespace freeconv

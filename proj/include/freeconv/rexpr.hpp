#pragma once

#include <variant>
#include <vector>

#include "freeconv/errors.hpp"
#include "freeconv/types.hpp"

namespace freeconv {

// R-transform term of the free Poisson law: lambda / (1 - z).
struct FreePoisson {
  double lambda;
};

// R-transform of a point mass: the constant c. Translates the measure by c.
struct Translate {
  double c;
};

// Rational perturbation scale*eps / (z - center)^order.
struct RationalPert {
  double eps;
  double center;
  int order = 2;
  double scale = 1.0;  // damping factor (e.g. 1/n), multiplies eps
};

using RTerm = std::variant<FreePoisson, Translate, RationalPert>;

// Sum-of-terms normal form of an R-transform expression. All parameters are
// real, which makes every expression conjugate-symmetric: R(conj z) = conj R(z).
class RExpr {
 public:
  RExpr() = default;
  RExpr(std::initializer_list<RTerm> terms) : terms_(terms) {}
  explicit RExpr(std::vector<RTerm> terms) : terms_(std::move(terms)) {}

  static RExpr free_poisson(double lambda) { return RExpr{FreePoisson{lambda}}; }
  static RExpr translate(double c) { return RExpr{Translate{c}}; }
  static RExpr rational_pert(double eps, double center, int order = 2, double scale = 1.0) {
    return RExpr{RationalPert{eps, center, order, scale}};
  }
  static RExpr zero() { return RExpr{}; }

  const std::vector<RTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Combines like terms: FreePoisson lambdas add, Translate offsets add,
  // RationalPert coefficients with equal (center, order) merge (scale is
  // folded into eps). Vanishing terms are dropped; term order is canonical.
  RExpr normalized() const;

  Complex eval(Complex z) const;          // R(z)
  Complex eval_prime(Complex z) const;    // R'(z)
  Complex eval_second(Complex z) const;   // R''(z)

  std::vector<double> poles() const;       // real pole locations of R
  double min_pole_distance(Complex z) const;

  double total_poisson() const;    // sum of FreePoisson lambdas
  double total_translate() const;  // sum of Translate offsets

  bool operator==(const RExpr& other) const;

 private:
  void check_pole(Complex z) const;
  std::vector<RTerm> terms_;
};

// Free additive convolution at the R-transform level: R_{mu (+) nu} = R_mu + R_nu.
// The result is normalized, so exact symbolic cancellations are visible
// structurally.
RExpr free_convolve(const RExpr& a, const RExpr& b);

// K(z) = 1/z + R(z) and derivatives.
Complex eval_k(const RExpr& e, Complex z);
Complex eval_k_prime(const RExpr& e, Complex z);
Complex eval_k_second(const RExpr& e, Complex z);

}  // namespace freeconv

#pragma once

#include <vector>

#include "freeconv/contour.hpp"

namespace freeconv {

// Geometry parameters for the region analysis of the rescaled transform.
// Constraints: lambda in (0,1); alpha in (0, 1/10) with
// 1 - 2*alpha > max(r, sqrt(lambda)) and 1 + 2*alpha < 1/sqrt(lambda);
// eta in (0, alpha/2); r in (0, sqrt(lambda)/(1-lambda)). The perturbation
// must be analytic outside the disk of radius r around 1/(1-lambda).
struct RegionConfig {
  double lambda = 0.5;
  double r = 0.4;
  double alpha = 0.09;
  double eta = 0.04;
  int corona_samples = 720;  // angular samples per corona
  int disk_samples = 40;     // disk sample grid is disk_samples^2

  void validate() const;
  static RegionConfig defaults(double lambda);
};

// Sample sets and boundary contours for the regions
//   A: {1-eta <= |z| <= 1+eta, |z -+ 1| >= eta, Im z <= 0}
//   B: {1-2*eta <= |z| <= 1-eta}      C: {1+eta <= |z| <= 1+2*eta}
//   D: {|z+1| <= alpha}               E: {|z-1| <= alpha}
class RegionSpec {
 public:
  explicit RegionSpec(const RegionConfig& cfg) : cfg_(cfg) { cfg.validate(); }

  const RegionConfig& config() const { return cfg_; }

  bool in_A(Complex z, double slack = 0.0) const;
  bool in_B(Complex z, double slack = 0.0) const;
  bool in_C(Complex z, double slack = 0.0) const;
  bool in_D(Complex z, double slack = 0.0) const;
  bool in_E(Complex z, double slack = 0.0) const;
  bool in_ADE(Complex z, double slack = 0.0) const { return in_A(z, slack) || in_D(z, slack) || in_E(z, slack); }

  // Positively oriented boundary of A: outer arc, eta-circle bite at +1,
  // inner arc, eta-circle bite at -1 (the bites are tangent to both arcs).
  Contour boundary_A() const;
  Contour circle_B_outer() const { return Contour::circle({0, 0}, 1.0 - cfg_.eta); }
  Contour circle_B_inner() const { return Contour::circle({0, 0}, 1.0 - 2.0 * cfg_.eta); }
  Contour circle_C_outer() const { return Contour::circle({0, 0}, 1.0 + 2.0 * cfg_.eta); }
  Contour circle_C_inner() const { return Contour::circle({0, 0}, 1.0 + cfg_.eta); }
  Contour circle_D(double radius_scale = 1.0) const {
    return Contour::circle({-1, 0}, cfg_.alpha * radius_scale);
  }
  Contour circle_E(double radius_scale = 1.0) const {
    return Contour::circle({1, 0}, cfg_.alpha * radius_scale);
  }
  Contour circle_D_eta() const { return Contour::circle({-1, 0}, cfg_.eta); }
  Contour circle_E_eta() const { return Contour::circle({1, 0}, cfg_.eta); }

  // Angular sweep z = rho * e^{i theta}, theta in [theta0, theta1], n samples.
  std::vector<Complex> corona_sweep(double rho, double theta0, double theta1, int n) const;

 private:
  RegionConfig cfg_;
};

}  // namespace freeconv

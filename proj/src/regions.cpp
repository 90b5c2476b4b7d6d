#include "freeconv/regions.hpp"

#include <algorithm>
#include <cmath>

namespace freeconv {

void RegionConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw InvalidConfigError("region lambda must be in (0,1)");
  double s = std::sqrt(lambda);
  if (!(alpha > 0.0 && alpha < 0.1)) throw InvalidConfigError("alpha must be in (0, 1/10)");
  if (!(1.0 - 2.0 * alpha > std::max(r, s)))
    throw InvalidConfigError("need 1 - 2*alpha > max(r, sqrt(lambda))");
  if (!(1.0 + 2.0 * alpha < 1.0 / s)) throw InvalidConfigError("need 1 + 2*alpha < 1/sqrt(lambda)");
  if (!(eta > 0.0 && eta < alpha / 2.0)) throw InvalidConfigError("eta must be in (0, alpha/2)");
  if (!(r > 0.0 && r < s / (1.0 - lambda)))
    throw InvalidConfigError("r must be in (0, sqrt(lambda)/(1-lambda))");
  // the image of the perturbation's singular disk must stay clear of the regions
  if (!(r * (1.0 - lambda) / s < 1.0 - 2.0 * alpha))
    throw InvalidConfigError("perturbation disk r(1-lambda)/sqrt(lambda) reaches the regions");
  if (corona_samples < 8 || disk_samples < 4) throw InvalidConfigError("too few samples");
}

RegionConfig RegionConfig::defaults(double lambda) {
  double s = std::sqrt(lambda);
  RegionConfig cfg;
  cfg.lambda = lambda;
  cfg.alpha = 0.95 * std::min({0.0999, 0.5 * (1.0 - s), 0.5 * (1.0 / s - 1.0)});
  cfg.eta = 0.45 * cfg.alpha;
  cfg.r = 0.5 * std::min(s / (1.0 - lambda), 1.0 - 2.0 * cfg.alpha);
  cfg.validate();
  return cfg;
}

bool RegionSpec::in_A(Complex z, double slack) const {
  double a = std::abs(z);
  return a >= 1.0 - cfg_.eta - slack && a <= 1.0 + cfg_.eta + slack &&
         std::abs(z - 1.0) >= cfg_.eta - slack && std::abs(z + 1.0) >= cfg_.eta - slack &&
         z.imag() <= slack;
}

bool RegionSpec::in_B(Complex z, double slack) const {
  double a = std::abs(z);
  return a >= 1.0 - 2.0 * cfg_.eta - slack && a <= 1.0 - cfg_.eta + slack;
}

bool RegionSpec::in_C(Complex z, double slack) const {
  double a = std::abs(z);
  return a >= 1.0 + cfg_.eta - slack && a <= 1.0 + 2.0 * cfg_.eta + slack;
}

bool RegionSpec::in_D(Complex z, double slack) const {
  return std::abs(z + 1.0) <= cfg_.alpha + slack;
}

bool RegionSpec::in_E(Complex z, double slack) const {
  return std::abs(z - 1.0) <= cfg_.alpha + slack;
}

Contour RegionSpec::boundary_A() const {
  const double eta = cfg_.eta;
  std::vector<Piece> ps;
  // outer arc through the lower half plane, -(1+eta) -> (1+eta)
  ps.push_back(Arc{{0, 0}, 1.0 + eta, -kPi, 0.0});
  // bite around +1, tangent to both arcs: (1+eta) -> (1-eta) below the axis
  ps.push_back(Arc{{1, 0}, eta, 0.0, -kPi});
  // inner arc back through the lower half plane, (1-eta) -> -(1-eta)
  ps.push_back(Arc{{0, 0}, 1.0 - eta, 0.0, -kPi});
  // bite around -1: -(1-eta) -> -(1+eta) below the axis
  ps.push_back(Arc{{-1, 0}, eta, 0.0, -kPi});
  return Contour(std::move(ps));
}

std::vector<Complex> RegionSpec::corona_sweep(double rho, double theta0, double theta1,
                                              int n) const {
  std::vector<Complex> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    double t = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
    double th = theta0 + t * (theta1 - theta0);
    out.push_back(rho * Complex{std::cos(th), std::sin(th)});
  }
  return out;
}

}  // namespace freeconv

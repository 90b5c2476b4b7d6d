#include "freeconv/rexpr.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace freeconv {

namespace {

constexpr double kPoleTol = 1e-14;

Complex ipow(Complex z, int n) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

void RExpr::check_pole(Complex z) const {
  for (double p : poles()) {
    if (std::abs(z - Complex{p, 0.0}) < kPoleTol)
      throw PoleError("R-expression evaluated at a pole (" + fmt_double(p) + ")", z);
  }
}

std::vector<double> RExpr::poles() const {
  std::vector<double> ps;
  for (const auto& t : terms_) {
    if (std::holds_alternative<FreePoisson>(t)) {
      ps.push_back(1.0);
    } else if (auto* rp = std::get_if<RationalPert>(&t)) {
      ps.push_back(rp->center);
    }
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

double RExpr::min_pole_distance(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (double p : poles()) d = std::min(d, std::abs(z - Complex{p, 0.0}));
  return d;
}

Complex RExpr::eval(Complex z) const {
  check_pole(z);
  Complex acc{0.0, 0.0};
  for (const auto& t : terms_) {
    if (auto* fp = std::get_if<FreePoisson>(&t)) {
      acc += fp->lambda / (Complex{1.0, 0.0} - z);
    } else if (auto* tr = std::get_if<Translate>(&t)) {
      acc += tr->c;
    } else {
      const auto& rp = std::get<RationalPert>(t);
      acc += rp.scale * rp.eps / ipow(z - rp.center, rp.order);
    }
  }
  return acc;
}

Complex RExpr::eval_prime(Complex z) const {
  check_pole(z);
  Complex acc{0.0, 0.0};
  for (const auto& t : terms_) {
    if (auto* fp = std::get_if<FreePoisson>(&t)) {
      Complex d = Complex{1.0, 0.0} - z;
      acc += fp->lambda / (d * d);
    } else if (std::holds_alternative<Translate>(t)) {
      // constant
    } else {
      const auto& rp = std::get<RationalPert>(t);
      acc += -static_cast<double>(rp.order) * rp.scale * rp.eps / ipow(z - rp.center, rp.order + 1);
    }
  }
  return acc;
}

Complex RExpr::eval_second(Complex z) const {
  check_pole(z);
  Complex acc{0.0, 0.0};
  for (const auto& t : terms_) {
    if (auto* fp = std::get_if<FreePoisson>(&t)) {
      Complex d = Complex{1.0, 0.0} - z;
      acc += 2.0 * fp->lambda / (d * d * d);
    } else if (std::holds_alternative<Translate>(t)) {
      // constant
    } else {
      const auto& rp = std::get<RationalPert>(t);
      double k = rp.order;
      acc += k * (k + 1.0) * rp.scale * rp.eps / ipow(z - rp.center, rp.order + 2);
    }
  }
  return acc;
}

double RExpr::total_poisson() const {
  double s = 0.0;
  for (const auto& t : terms_)
    if (auto* fp = std::get_if<FreePoisson>(&t)) s += fp->lambda;
  return s;
}

double RExpr::total_translate() const {
  double s = 0.0;
  for (const auto& t : terms_)
    if (auto* tr = std::get_if<Translate>(&t)) s += tr->c;
  return s;
}

RExpr RExpr::normalized() const {
  double lambda = 0.0, shift = 0.0;
  std::map<std::pair<double, int>, double> perts;  // (center, order) -> eps*scale
  for (const auto& t : terms_) {
    if (auto* fp = std::get_if<FreePoisson>(&t)) {
      lambda += fp->lambda;
    } else if (auto* tr = std::get_if<Translate>(&t)) {
      shift += tr->c;
    } else {
      const auto& rp = std::get<RationalPert>(t);
      perts[{rp.center, rp.order}] += rp.scale * rp.eps;
    }
  }
  std::vector<RTerm> out;
  if (lambda != 0.0) out.push_back(FreePoisson{lambda});
  if (shift != 0.0) out.push_back(Translate{shift});
  for (const auto& [key, eps] : perts) {
    if (eps != 0.0) out.push_back(RationalPert{eps, key.first, key.second, 1.0});
  }
  return RExpr(std::move(out));
}

bool RExpr::operator==(const RExpr& other) const {
  auto a = normalized().terms_;
  auto b = other.normalized().terms_;
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].index() != b[i].index()) return false;
    bool same = std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          const T& y = std::get<T>(b[i]);
          if constexpr (std::is_same_v<T, FreePoisson>) return x.lambda == y.lambda;
          if constexpr (std::is_same_v<T, Translate>) return x.c == y.c;
          if constexpr (std::is_same_v<T, RationalPert>)
            return x.eps == y.eps && x.center == y.center && x.order == y.order &&
                   x.scale == y.scale;
        },
        a[i]);
    if (!same) return false;
  }
  return true;
}

RExpr free_convolve(const RExpr& a, const RExpr& b) {
  std::vector<RTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return RExpr(std::move(terms)).normalized();
}

Complex eval_k(const RExpr& e, Complex z) {
  if (std::abs(z) < 1e-14) throw PoleError("K evaluated at zero", z);
  return 1.0 / z + e.eval(z);
}

Complex eval_k_prime(const RExpr& e, Complex z) {
  if (std::abs(z) < 1e-14) throw PoleError("K' evaluated at zero", z);
  return -1.0 / (z * z) + e.eval_prime(z);
}

Complex eval_k_second(const RExpr& e, Complex z) {
  if (std::abs(z) < 1e-14) throw PoleError("K'' evaluated at zero", z);
  return 2.0 / (z * z * z) + e.eval_second(z);
}

}  // namespace freeconv

#include "freeconv/newton.hpp"

#include <cmath>
#include <vector>

namespace freeconv {

Complex newton_solve(const std::function<Complex(Complex)>& f,
                     const std::function<Complex(Complex)>& fprime, Complex seed,
                     double tol, int max_iter) {
  if (!(tol > 0)) throw InvalidConfigError("newton_solve: tol must be > 0");
  std::vector<Complex> trace{seed};
  Complex w = seed;
  Complex fw = f(w);
  if (!is_finite(fw)) throw NoRootError("newton_solve: seed evaluates non-finite", trace);

  for (int it = 0; it < max_iter; ++it) {
    double res = std::abs(fw);
    if (res <= tol) return w;
    Complex d = fprime(w);
    if (!is_finite(d) || std::abs(d) == 0.0)
      throw NoRootError("newton_solve: vanishing derivative at iterate " + std::to_string(it),
                        trace);
    Complex step = fw / d;
    // damping: halve until |f| decreases
    double damp = 1.0;
    Complex w_next;
    Complex f_next;
    bool ok = false;
    for (int h = 0; h < 40; ++h) {
      w_next = w - damp * step;
      f_next = f(w_next);
      if (is_finite(f_next) && std::abs(f_next) < res) {
        ok = true;
        break;
      }
      damp *= 0.5;
    }
    if (!ok)
      throw NoRootError("newton_solve: no descent at iterate " + std::to_string(it), trace);
    w = w_next;
    fw = f_next;
    trace.push_back(w);
  }
  if (std::abs(fw) <= tol) return w;
  throw NoRootError("newton_solve: max iterations (" + std::to_string(max_iter) +
                        ") exceeded, residual " + fmt_double(std::abs(fw)),
                    trace);
}

}  // namespace freeconv

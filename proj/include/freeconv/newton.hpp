#pragma once

#include <functional>

#include "freeconv/errors.hpp"
#include "freeconv/types.hpp"

namespace freeconv {

// Damped Newton iteration for f(w) = 0 in the complex plane. Steps that do
// not reduce |f| are halved (up to 40 times) before the iteration is declared
// divergent. Returns w with |f(w)| <= tol; throws NoRootError carrying the
// iterate trace otherwise.
Complex newton_solve(const std::function<Complex(Complex)>& f,
                     const std::function<Complex(Complex)>& fprime, Complex seed,
                     double tol, int max_iter);

}  // namespace freeconv

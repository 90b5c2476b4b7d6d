#pragma once

#include <vector>

#include "freeconv/contour.hpp"
#include "freeconv/rexpr.hpp"

namespace freeconv {

// Free cumulants kappa_1..kappa_N; kappa_{m+1} is the z^m Taylor coefficient
// of the R-transform at 0.
using CumulantSeq = std::vector<double>;

// Moments m_1..m_N from free cumulants by the non-crossing partition
// recursion m_n = sum_{k=1}^{n} kappa_k * sum_{i_1+...+i_k = n-k} prod m_{i_j}
// with m_0 = 1.
std::vector<double> cumulants_to_moments(const CumulantSeq& kappa);

// Taylor coefficients of R at 0 by Cauchy's integral formula on |z| = rho.
// rho must stay below the distance from 0 to the nearest pole; rho <= 0
// selects min(0.5, half that distance), which keeps the 1/z^(m+1) factor from
// amplifying rounding noise past the 1e-10 coefficient accuracy. Imaginary
// residues above 1e-8 raise SymmetryViolationError; below that they are
// discarded.
CumulantSeq r_taylor_coefficients(const RExpr& e, int n_max,
                                  const QuadratureConfig& cfg = {}, double rho = 0.0);

}  // namespace freeconv

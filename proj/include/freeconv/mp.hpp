#pragma once

#include "freeconv/measure.hpp"

namespace freeconv {

// Marchenko-Pastur (free Poisson) law with mean lambda > 0:
// density sqrt(4*lambda - (x-1-lambda)^2) / (2*pi*x) on
// [(1-sqrt(lambda))^2, (1+sqrt(lambda))^2], plus an atom of mass 1-lambda at 0
// when lambda < 1.
double mp_density(double lambda, double x);
void mp_support(double lambda, double* lo, double* hi);
SpectralMeasure mp_closed_form(double lambda, int grid_points = 20001);

// Reference Cauchy transform of the Marchenko-Pastur law from the quadratic
// z*G^2 - (z+1-lambda)*G + 1 = 0, branch with Im G < 0 and z*G -> 1.
Complex mp_cauchy(double lambda, Complex z);

}  // namespace freeconv

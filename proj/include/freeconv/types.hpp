#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace freeconv {

using Complex = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;
inline const Complex kI{0.0, 1.0};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Shortest exact decimal form; all file output goes through these so that
// identical inputs produce byte-identical files.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string fmt_complex(const Complex& z) {
  return fmt_double(z.real()) + (z.imag() < 0 ? "" : "+") + fmt_double(z.imag()) + "i";
}

}  // namespace freeconv

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "freeconv/types.hpp"

namespace freeconv {

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature ran out of refinement depth; carries the last estimate
// and the error bound it could not push below tolerance.
struct RefinementFailure : NumericError {
  Complex estimate;
  double error_bound;
  RefinementFailure(const std::string& what, Complex est, double bound)
      : NumericError(what), estimate(est), error_bound(bound) {}
};

struct NoRootError : NumericError {
  std::vector<Complex> iterates;
  NoRootError(const std::string& what, std::vector<Complex> trace)
      : NumericError(what), iterates(std::move(trace)) {}
};

struct TraceFailure : NumericError {
  std::vector<Complex> partial;
  TraceFailure(const std::string& what, std::vector<Complex> points)
      : NumericError(what), partial(std::move(points)) {}
};

struct PoleError : NumericError {
  Complex at;
  PoleError(const std::string& what, Complex z) : NumericError(what), at(z) {}
};

struct InversionError : NumericError {
  Complex target;
  InversionError(const std::string& what, Complex z) : NumericError(what), target(z) {}
};

struct WrongBranchError : InversionError {
  using InversionError::InversionError;
};

struct NegativeDensityError : NumericError {
  double x, value;
  NegativeDensityError(const std::string& what, double at, double v)
      : NumericError(what), x(at), value(v) {}
};

struct MassError : NumericError {
  double mass;
  MassError(const std::string& what, double m) : NumericError(what), mass(m) {}
};

struct DomainViolationError : NumericError {
  Complex at;
  DomainViolationError(const std::string& what, Complex z) : NumericError(what), at(z) {}
};

struct SymmetryViolationError : NumericError {
  using NumericError::NumericError;
};

struct InvalidConfigError : NumericError {
  using NumericError::NumericError;
};

struct GateFailure : NumericError {
  std::string stage;
  GateFailure(const std::string& stage_, const std::string& what)
      : NumericError(stage_ + ": " + what), stage(stage_) {}
};

}  // namespace freeconv

#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural residual exceeded tolerance; carries the measured residual.
struct StructureViolation : Error {
  double residual;
  StructureViolation(const std::string& what, double r) : Error(what), residual(r) {}
};

struct InvalidSpec : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateSpectrum : Error { using Error::Error; };
struct NonIntegrable : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct UnsupportedCase : Error { using Error::Error; };

struct ContourFailure : Error {
  double value, err;
  ContourFailure(const std::string& what, double v, double e) : Error(what), value(v), err(e) {}
};

struct QuadratureFailure : Error {
  double value, err;
  QuadratureFailure(const std::string& what, double v, double e) : Error(what), value(v), err(e) {}
};

struct CrossCheckFailure : Error { using Error::Error; };

}  // namespace rmt

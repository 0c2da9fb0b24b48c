#pragma once

#include <stdexcept>
#include <string>

namespace layerlab {

enum class ErrorCode {
  NonRealPrincipalPart = 1,
  BadMultiIndex,
  NotElliptic,
  EvalAtOrigin,
  UnsupportedFamily,
  BadShapeParams,
  NeedsAmbientForm,
  DegenerateNodeSet,
  NonFiniteIntegrand,
  MissingSplit,
  MissingSingularityDeclaration,
  NonFiniteKernelValue,
  UnsupportedDimension,
  RoughDensityUnsupported,
  InvalidConfig,
  Io,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace layerlab

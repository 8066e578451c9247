#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foamlab {

enum class ErrorCode {
  InvalidArgument,
  SingularBasis,
  UnknownCatalogEntry,
  DimensionMismatch,
  DimensionTooLarge,
  EnumerationBudgetExceeded,
  Unbounded,
  EmptyIntersection,
  TooManyHalfSpaces,
  DegenerateFacet,
  LPFailure,
  SNotInRange,
  AlphaNotInRange,
  ZeroInradius,
  DegenerateFace,
  UnsupportedDimension,
  DegenerateLattice,
  AllRestartsFailed,
  UnsupportedFormatForDim,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The message is prefixed with the
/// owning module and the error code, e.g. "[lattice-core] SingularBasis: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace foamlab

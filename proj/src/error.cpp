#include "foamlab/error.hpp"

namespace foamlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::UnknownCatalogEntry: return "UnknownCatalogEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::TooManyHalfSpaces: return "TooManyHalfSpaces";
    case ErrorCode::DegenerateFacet: return "DegenerateFacet";
    case ErrorCode::LPFailure: return "LPFailure";
    case ErrorCode::SNotInRange: return "SNotInRange";
    case ErrorCode::AlphaNotInRange: return "AlphaNotInRange";
    case ErrorCode::ZeroInradius: return "ZeroInradius";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::AllRestartsFailed: return "AllRestartsFailed";
    case ErrorCode::UnsupportedFormatForDim: return "UnsupportedFormatForDim";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& detail)
    : std::runtime_error("[" + module + "] " + std::string(to_string(code)) + ": " + detail),
      code_(code),
      module_(std::move(module)) {}

}  // namespace foamlab

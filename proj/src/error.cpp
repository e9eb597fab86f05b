#include "concrete_geom/error.hpp"

namespace concrete {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedDim: return "UnsupportedDim";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace concrete

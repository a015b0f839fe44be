#include "hdlrt/error.hpp"

namespace hdlrt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::DimensionExceedsSample: return "DimensionExceedsSample";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidDesign: return "InvalidDesign";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
  }
  return "Unknown";
}

}  // namespace hdlrt

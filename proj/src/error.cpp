#include "maghull/error.hpp"

namespace maghull {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::NonRepresentable: return "NonRepresentable";
    case ErrorCode::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorCode::OverlapAmbiguity: return "OverlapAmbiguity";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace maghull

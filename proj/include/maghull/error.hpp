#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maghull {

enum class ErrorCode {
  InvalidArgument,
  DuplicatePoints,
  NonFinite,
  FactorizationFailure,
  NonRepresentable,
  QuadratureDivergence,
  OverlapAmbiguity,
  InvalidSpec,
  Timeout,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. `what()` is prefixed with the
/// code name so that diagnostics surface verbatim at the CLI boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace maghull

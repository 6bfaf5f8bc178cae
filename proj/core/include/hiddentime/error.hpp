#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hiddentime {

enum class ErrorCode {
  InvalidArgument,
  NoDetectors,
  NonPositiveLength,
  DuplicateNodeId,
  DanglingEndpoint,
  SelfLoop,
  DuplicateRib,
  MissingSource,
  MultipleSources,
  MissingWavelength,
  LengthMismatch,
  DisconnectedDetector,
  MalformedDocument,
  PathBudgetExceeded,
  ProtocolOrder,
  DarkTrial,
  DarkConfiguration,
  Deadlock,
  SupportMismatch,
  InvalidVelocity,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code next to
/// the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hiddentime

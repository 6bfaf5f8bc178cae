#include "hiddentime/error.hpp"

namespace hiddentime {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NoDetectors: return "no detectors";
    case ErrorCode::NonPositiveLength: return "non-positive length";
    case ErrorCode::DuplicateNodeId: return "duplicate node id";
    case ErrorCode::DanglingEndpoint: return "dangling endpoint";
    case ErrorCode::SelfLoop: return "self loop";
    case ErrorCode::DuplicateRib: return "duplicate rib";
    case ErrorCode::MissingSource: return "missing source";
    case ErrorCode::MultipleSources: return "multiple sources";
    case ErrorCode::MissingWavelength: return "missing wavelength";
    case ErrorCode::LengthMismatch: return "length mismatch";
    case ErrorCode::DisconnectedDetector: return "disconnected detector";
    case ErrorCode::MalformedDocument: return "malformed document";
    case ErrorCode::PathBudgetExceeded: return "path budget exceeded";
    case ErrorCode::ProtocolOrder: return "protocol-order violation";
    case ErrorCode::DarkTrial: return "dark trial";
    case ErrorCode::DarkConfiguration: return "dark configuration";
    case ErrorCode::Deadlock: return "deadlock";
    case ErrorCode::SupportMismatch: return "support mismatch";
    case ErrorCode::InvalidVelocity: return "invalid velocity";
  }
  return "unknown";
}

}  // namespace hiddentime

#include "arena/error.hpp"

namespace arena {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUnknownNode: return "unknown-node";
    case ErrorCode::kRootOnlyTree: return "root-only-tree";
    case ErrorCode::kNoFetchableRoot: return "no-fetchable-root";
    case ErrorCode::kNetworkFailure: return "network-failure";
    case ErrorCode::kHttpError: return "http-error";
    case ErrorCode::kTimeout: return "timeout";
    case ErrorCode::kRobotsExcluded: return "robots-excluded";
    case ErrorCode::kProviderError: return "provider-error";
    case ErrorCode::kRateLimited: return "rate-limited";
    case ErrorCode::kAuthError: return "auth-error";
    case ErrorCode::kMalformedResponse: return "malformed-response";
    case ErrorCode::kPromptTooLarge: return "prompt-too-large";
    case ErrorCode::kEmptyContext: return "empty-context";
    case ErrorCode::kUnfilledPlaceholder: return "unfilled-placeholder";
    case ErrorCode::kExpansionExhausted: return "expansion-exhausted";
    case ErrorCode::kParseFailure: return "parse-failure";
    case ErrorCode::kLintFailure: return "lint-failure";
    case ErrorCode::kMalformedJson: return "malformed-json";
    case ErrorCode::kMissingField: return "missing-field";
    case ErrorCode::kEmptyChecklist: return "empty-checklist";
    case ErrorCode::kUnknownEnum: return "unknown-enum";
    case ErrorCode::kInconsistentFields: return "inconsistent-fields";
    case ErrorCode::kDisconnectedGraph: return "disconnected-comparison-graph";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kSchemaVersionMismatch: return "schema-version-mismatch";
    case ErrorCode::kEmptyCollection: return "empty-collection";
    case ErrorCode::kConfigError: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

bool is_transient(ErrorCode code) {
  return code == ErrorCode::kRateLimited || code == ErrorCode::kTimeout ||
         code == ErrorCode::kNetworkFailure ||
         code == ErrorCode::kProviderError;
}

}  // namespace arena

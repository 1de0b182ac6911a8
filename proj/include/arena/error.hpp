#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class ErrorCode {
  kInvalidArgument,
  kUnknownNode,
  kRootOnlyTree,
  kNoFetchableRoot,
  kNetworkFailure,
  kHttpError,
  kTimeout,
  kRobotsExcluded,
  kProviderError,
  kRateLimited,
  kAuthError,
  kMalformedResponse,
  kPromptTooLarge,
  kEmptyContext,
  kUnfilledPlaceholder,
  kExpansionExhausted,
  kParseFailure,
  kLintFailure,
  kMalformedJson,
  kMissingField,
  kEmptyChecklist,
  kUnknownEnum,
  kInconsistentFields,
  kDisconnectedGraph,
  kNonConvergence,
  kLengthMismatch,
  kDegenerate,
  kIoError,
  kSchemaVersionMismatch,
  kEmptyCollection,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

// Every engine failure surfaces as this type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures a caller may retry (transient network conditions).
bool is_transient(ErrorCode code);

}  // namespace arena

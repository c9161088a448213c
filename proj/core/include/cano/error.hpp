#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cano {

enum class ErrorCode {
  kInvalidInput,
  kDegenerateGeometry,
  kNoStablePose,
  kSemanticUnavailable,
  kPcaDegenerate,
  kUnregisteredCategory,
  kIo,
  kUnsupportedFormat,
  kLabelCountMismatch,
  kStaleAnnotation,
  kUnannotated,
  kStaleLease,
  kInvalidDecision,
  kExternalScorer,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cano

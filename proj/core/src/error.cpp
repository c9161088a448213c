#include "cano/error.hpp"

namespace cano {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kNoStablePose: return "no-stable-pose";
    case ErrorCode::kSemanticUnavailable: return "semantic-unavailable";
    case ErrorCode::kPcaDegenerate: return "pca-degenerate";
    case ErrorCode::kUnregisteredCategory: return "unregistered-category";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kUnsupportedFormat: return "unsupported-format";
    case ErrorCode::kLabelCountMismatch: return "label-count-mismatch";
    case ErrorCode::kStaleAnnotation: return "stale-annotation";
    case ErrorCode::kUnannotated: return "unannotated";
    case ErrorCode::kStaleLease: return "stale-lease";
    case ErrorCode::kInvalidDecision: return "invalid-decision";
    case ErrorCode::kExternalScorer: return "external-scorer";
  }
  return "unknown";
}

}  // namespace cano

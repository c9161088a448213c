#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cano/candidates.hpp"
#include "cano/mesh_io.hpp"

namespace cano::io {

/// Discard reasons: quality-thin-shell, quality-meaningless, quality-incomplete,
/// misclassified, pose-error-none-correct, or "other:<text>".
bool is_valid_discard_reason(std::string_view reason);
/// True for reasons that reject the pose rather than the object itself.
bool is_pose_discard(std::string_view reason);

struct AnnotationRecord {
  std::string object_id;
  std::optional<Tag> selected;  // empty for a discard
  std::string discard_reason;   // non-empty iff discarded
  std::string annotator_id;
  std::int64_t elapsed_ms = 0;
  std::int64_t timestamp_ms = 0;  // unix epoch
  std::string candidate_set_hash;

  bool is_discard() const { return !selected.has_value(); }
  /// Throws invalid-decision when the decision/reason pair is inconsistent.
  void validate() const;

  bool operator==(const AnnotationRecord&) const = default;
};

std::string format_annotation(const AnnotationRecord& rec);
AnnotationRecord parse_annotation(std::string_view line);

/// Append-only writer. Each record goes out as one newline-terminated write on
/// an O_APPEND descriptor, so a crash leaves at most one partial trailing line;
/// opening the log cuts such a line off before appending.
class AnnotationLog {
 public:
  explicit AnnotationLog(const fs::path& path, bool sync = true);
  ~AnnotationLog();
  AnnotationLog(const AnnotationLog&) = delete;
  AnnotationLog& operator=(const AnnotationLog&) = delete;

  /// Thread-safe. Throws invalid-decision for invalid records, io-error on write failure.
  void append(const AnnotationRecord& rec);
  const fs::path& path() const { return path_; }
  /// Bytes of a partial trailing line removed when the log was opened.
  std::size_t repaired_bytes() const { return repaired_bytes_; }

 private:
  fs::path path_;
  bool sync_;
  int fd_ = -1;
  std::size_t repaired_bytes_ = 0;
  std::mutex mu_;
};

struct AnnotationReadResult {
  std::vector<AnnotationRecord> records;    // every complete record, file order
  std::vector<AnnotationRecord> effective;  // last record per object, ordered by first appearance
  std::size_t truncated_tail = 0;           // 1 if the file ends in a partial line
  std::size_t duplicates = 0;               // records superseded by a later one
};

/// A missing file reads as an empty log. Throws io-error on a malformed complete line.
AnnotationReadResult read_annotations(const fs::path& path);

struct AnnotatorStats {
  std::size_t count = 0;
  double mean_elapsed_s = 0.0;
};

struct AnnotationStats {
  std::size_t total = 0;
  std::size_t retained = 0;
  std::size_t quality_discards = 0;
  std::size_t pose_discards = 0;
  double retained_pct = 0.0;
  double quality_discard_pct = 0.0;
  double pose_discard_pct = 0.0;
  std::map<std::string, std::size_t> tag_counts;  // every tag present, zero if unused
  std::map<std::string, double> tag_pct;          // share of all records
  std::map<std::string, std::size_t> discard_reasons;
  std::map<std::string, AnnotatorStats> annotators;
};

AnnotationStats compute_stats(std::span<const AnnotationRecord> records);

}  // namespace cano::io

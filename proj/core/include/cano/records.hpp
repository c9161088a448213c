#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cano/candidates.hpp"
#include "cano/mesh_io.hpp"

namespace cano::io {

/// One candidate set per line: object_id, category, hash, flags and the five
/// candidates as {"tag", "q": [w, x, y, z], "diagnostics"}.
std::string format_candidate_set(const CandidateSet& set);
/// Throws io-error on malformed input or when the stored hash disagrees with the rotations.
CandidateSet parse_candidate_set(std::string_view line);
void write_candidate_sets(const fs::path& path, const std::vector<CandidateSet>& sets);
std::vector<CandidateSet> read_candidate_sets(const fs::path& path);

enum class PoseSource { kAnnotation, kPrediction, kGroundTruth };

std::string_view to_string(PoseSource source);

struct PoseRecord {
  std::string object_id;
  Rotation rotation;
  PoseSource source = PoseSource::kAnnotation;

  bool operator==(const PoseRecord&) const = default;
};

/// `{"object_id", "q": [w, x, y, z], "source": "annotation" | "prediction" | "ground-truth"}`
std::string format_pose_record(const PoseRecord& rec);
/// Throws io-error on malformed input or a quaternion more than 1e-6 from unit norm.
PoseRecord parse_pose_record(std::string_view line);
void write_pose_records(const fs::path& path, const std::vector<PoseRecord>& records);
std::vector<PoseRecord> read_pose_records(const fs::path& path);

/// Lines of a text file, without terminators; blank lines skipped.
std::vector<std::string> read_lines(const fs::path& path);

}  // namespace cano::io

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cano/cloud.hpp"
#include "cano/criteria.hpp"
#include "cano/mesh.hpp"
#include "cano/stability.hpp"
#include "cano/template.hpp"

namespace cano {

enum class Tag { kHS, kHG, kHGFlip, kSupHS, kPcaHS };

inline constexpr std::array<Tag, 5> kAllTags{Tag::kHS, Tag::kHG, Tag::kHGFlip, Tag::kSupHS, Tag::kPcaHS};

/// "HS", "HG", "HG_FLIP", "SUP_HS", "PCA_HS"
std::string_view to_string(Tag tag);
std::optional<Tag> parse_tag(std::string_view text);

struct Candidate {
  Tag tag = Tag::kHS;
  Rotation rotation;  // object frame -> canonical frame
  std::map<std::string, double> diagnostics;
};

struct CandidateFlags {
  bool continuous_symmetry = false;
  bool semantic_unavailable = false;
  bool no_stable_pose = false;
  bool pca_degenerate = false;

  bool operator==(const CandidateFlags&) const = default;
};

struct CandidateSet {
  std::string object_id;
  std::string category;
  std::array<Candidate, 5> candidates;  // in kAllTags order
  CandidateFlags flags;

  const Candidate& operator[](Tag tag) const { return candidates[static_cast<std::size_t>(tag)]; }

  /// "<object_id>\n" followed by "<TAG> w x y z\n" per candidate, 17 significant digits.
  std::string canonical_text() const;
  /// FNV-1a 64 of canonical_text(), as 16 lowercase hex digits.
  std::string hash() const;
};

struct PipelineConfig {
  CriterionConfig criteria;
  StabilityOptions stability;
  double pca_gap_tolerance = kDefaultPcaGapTolerance;
  /// Picks among support candidates; a HeuristicUprightScorer when null.
  std::shared_ptr<UprightScorer> scorer;
};

/// A loaded object normalized to the unit sphere; the mesh shares the cloud's transform.
struct PreparedObject {
  std::string object_id;
  std::string category;
  std::optional<Mesh> mesh;
  LabeledCloud cloud;
  NormalizationTransform transform;
};

PreparedObject prepare_object(std::string object_id, std::string category, std::optional<Mesh> mesh,
                              const LabeledCloud& cloud);

/// The five candidate rotations with documented fallbacks for failed branches.
CandidateSet generate_candidates(const PreparedObject& object, const CategoryTemplate& tmpl,
                                 const PipelineConfig& cfg = {});

/// Looks the template up by the object's category (unregistered-category otherwise).
CandidateSet generate_candidates(const PreparedObject& object, const TemplateRegistry& registry,
                                 const PipelineConfig& cfg = {});

/// Runs `task(i)` for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace cano

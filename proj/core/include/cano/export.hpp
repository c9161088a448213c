#pragma once

#include <cstddef>
#include <vector>

#include "cano/annotation_log.hpp"
#include "cano/candidates.hpp"
#include "cano/registry.hpp"

namespace cano::io {

struct ExportSummary {
  std::size_t objects = 0;
  std::size_t exported = 0;
  std::size_t duplicates = 0;
  AnnotationStats stats;
};

/// Writes the canonicalized dataset into `out_dir`:
///   objects/<id>.ply          normalized cloud under the selected rotation
///   objects/<id>.labels       its part labels, when present
///   objects/<id>_mesh.ply     the mesh under the same rotation, when present
///   poses.jsonl               one annotation PoseRecord per exported object
///   summary.json              retained share, discard breakdown, tag distribution
///
/// Every manifest object needs an annotation (unannotated otherwise) whose
/// candidate_set_hash matches the stored candidate set (stale-annotation otherwise).
/// Output depends only on the inputs, so reruns are byte-identical.
ExportSummary export_canonical(const std::vector<ObjectEntry>& manifest, const std::vector<CandidateSet>& candidates,
                               const AnnotationReadResult& annotations, const fs::path& out_dir,
                               const LoadOptions& load = {});

}  // namespace cano::io

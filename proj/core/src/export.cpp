#include "cano/export.hpp"

#include <fstream>
#include <map>

#include "cano/records.hpp"
#include "json_util.hpp"

namespace cano::io {

ExportSummary export_canonical(const std::vector<ObjectEntry>& manifest, const std::vector<CandidateSet>& candidates,
                               const AnnotationReadResult& annotations, const fs::path& out_dir,
                               const LoadOptions& load) {
  std::map<std::string, const CandidateSet*> sets;
  for (const auto& s : candidates) {
    sets[s.object_id] = &s;
  }
  std::map<std::string, const AnnotationRecord*> decided;
  for (const auto& r : annotations.effective) {
    decided[r.object_id] = &r;
  }

  // Validate everything before touching the output directory.
  std::vector<const AnnotationRecord*> chosen;
  std::vector<AnnotationRecord> used;
  for (const auto& entry : manifest) {
    const auto a = decided.find(entry.id);
    if (a == decided.end()) {
      throw Error(ErrorCode::kUnannotated, "object '" + entry.id + "' has no annotation");
    }
    const auto s = sets.find(entry.id);
    if (s == sets.end()) {
      throw Error(ErrorCode::kStaleAnnotation, "object '" + entry.id + "' has no stored candidate set");
    }
    if (a->second->candidate_set_hash != s->second->hash()) {
      throw Error(ErrorCode::kStaleAnnotation, "annotation of '" + entry.id + "' was made against candidate set " +
                                                   a->second->candidate_set_hash + ", current is " +
                                                   s->second->hash());
    }
    chosen.push_back(a->second);
    used.push_back(*a->second);
  }

  const fs::path objects_dir = out_dir / "objects";
  fs::create_directories(objects_dir);
  std::vector<PoseRecord> poses;
  ExportSummary summary;
  summary.objects = manifest.size();
  summary.duplicates = annotations.duplicates;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const ObjectEntry& entry = manifest[i];
    const AnnotationRecord& rec = *chosen[i];
    if (!rec.selected) {
      continue;
    }
    const Rotation r = (*sets.at(entry.id))[*rec.selected].rotation;
    const PreparedObject obj = load_prepared_object(entry, load);
    const LabeledCloud cloud = rotate(obj.cloud, r);
    write_ply(objects_dir / (entry.id + ".ply"), cloud, PlyEncoding::kBinaryLittleEndian);
    if (cloud.has_labels()) {
      write_labels(objects_dir / (entry.id + ".labels"), {cloud.part_names, cloud.labels});
    }
    if (obj.mesh) {
      write_ply(objects_dir / (entry.id + "_mesh.ply"), rotate_mesh(*obj.mesh, r), PlyEncoding::kBinaryLittleEndian);
    }
    poses.push_back({entry.id, r, PoseSource::kAnnotation});
    ++summary.exported;
  }
  write_pose_records(out_dir / "poses.jsonl", poses);

  summary.stats = compute_stats(used);
  detail::json j = detail::stats_json(summary.stats);
  j["objects"] = summary.objects;
  j["exported"] = summary.exported;
  j["duplicate_annotations"] = summary.duplicates;
  std::ofstream out(out_dir / "summary.json", std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + (out_dir / "summary.json").string());
  }
  out << j.dump(2) << '\n';
  return summary;
}

}  // namespace cano::io

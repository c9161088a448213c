#include "cano/records.hpp"

#include <fstream>
#include <limits>

#include "json_util.hpp"

namespace cano::io {

namespace {

using detail::field;
using detail::json;

json quaternion_json(const Rotation& r) {
  const auto q = r.wxyz();
  return json::array({q[0], q[1], q[2], q[3]});
}

Rotation parse_quaternion(const json& j, const std::string& where) {
  const auto q = field<std::vector<double>>(j, "q", where);
  if (q.size() != 4) {
    throw Error(ErrorCode::kIo, where + ": quaternion needs 4 components");
  }
  try {
    return Rotation::from_unit_quaternion(q[0], q[1], q[2], q[3]);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, where + ": " + e.what());
  }
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  for (const auto& l : lines) {
    out << l << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed: " + path.string());
  }
}

constexpr std::array<std::string_view, 3> kSourceNames{"annotation", "prediction", "ground-truth"};

}  // namespace

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") != std::string::npos) {
      out.push_back(std::move(line));
    }
  }
  return out;
}

std::string format_candidate_set(const CandidateSet& set) {
  json cands = json::array();
  for (const auto& c : set.candidates) {
    json diag = json::object();
    for (const auto& [k, v] : c.diagnostics) {
      diag[k] = v;
    }
    cands.push_back({{"tag", to_string(c.tag)}, {"q", quaternion_json(c.rotation)}, {"diagnostics", diag}});
  }
  const json j{{"object_id", set.object_id},
               {"category", set.category},
               {"hash", set.hash()},
               {"flags",
                {{"continuous_symmetry", set.flags.continuous_symmetry},
                 {"semantic_unavailable", set.flags.semantic_unavailable},
                 {"no_stable_pose", set.flags.no_stable_pose},
                 {"pca_degenerate", set.flags.pca_degenerate}}},
               {"candidates", cands}};
  return j.dump();
}

CandidateSet parse_candidate_set(std::string_view line) {
  const json j = detail::parse_json(line, "candidate set");
  CandidateSet set;
  set.object_id = field<std::string>(j, "object_id", "candidate set");
  const std::string where = "candidate set '" + set.object_id + "'";
  set.category = j.value("category", std::string());
  if (j.contains("flags")) {
    const json& f = j["flags"];
    set.flags.continuous_symmetry = f.value("continuous_symmetry", false);
    set.flags.semantic_unavailable = f.value("semantic_unavailable", false);
    set.flags.no_stable_pose = f.value("no_stable_pose", false);
    set.flags.pca_degenerate = f.value("pca_degenerate", false);
  }
  const auto cands = field<json>(j, "candidates", where);
  if (!cands.is_array() || cands.size() != kAllTags.size()) {
    throw Error(ErrorCode::kIo, where + ": expected exactly 5 candidates");
  }
  for (std::size_t i = 0; i < kAllTags.size(); ++i) {
    const json& c = cands[i];
    const auto tag = parse_tag(field<std::string>(c, "tag", where));
    if (!tag || *tag != kAllTags[i]) {
      throw Error(ErrorCode::kIo, where + ": candidate " + std::to_string(i) + " has the wrong tag");
    }
    Candidate& out = set.candidates[i];
    out.tag = *tag;
    out.rotation = parse_quaternion(c, where);
    if (c.contains("diagnostics")) {
      for (const auto& [k, v] : c["diagnostics"].items()) {
        out.diagnostics[k] = v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  if (j.contains("hash") && field<std::string>(j, "hash", where) != set.hash()) {
    throw Error(ErrorCode::kIo, where + ": stored hash does not match the candidate rotations");
  }
  return set;
}

void write_candidate_sets(const fs::path& path, const std::vector<CandidateSet>& sets) {
  std::vector<std::string> lines;
  lines.reserve(sets.size());
  for (const auto& s : sets) {
    lines.push_back(format_candidate_set(s));
  }
  write_lines(path, lines);
}

std::vector<CandidateSet> read_candidate_sets(const fs::path& path) {
  std::vector<CandidateSet> out;
  for (const auto& line : read_lines(path)) {
    out.push_back(parse_candidate_set(line));
  }
  return out;
}

std::string_view to_string(PoseSource source) { return kSourceNames[static_cast<std::size_t>(source)]; }

std::string format_pose_record(const PoseRecord& rec) {
  return json{{"object_id", rec.object_id}, {"q", quaternion_json(rec.rotation)}, {"source", to_string(rec.source)}}
      .dump();
}

PoseRecord parse_pose_record(std::string_view line) {
  const json j = detail::parse_json(line, "pose record");
  PoseRecord rec;
  rec.object_id = field<std::string>(j, "object_id", "pose record");
  const std::string where = "pose record '" + rec.object_id + "'";
  rec.rotation = parse_quaternion(j, where);
  const auto source = field<std::string>(j, "source", where);
  bool found = false;
  for (std::size_t i = 0; i < kSourceNames.size(); ++i) {
    if (kSourceNames[i] == source) {
      rec.source = static_cast<PoseSource>(i);
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kIo, where + ": unknown source '" + source + "'");
  }
  return rec;
}

void write_pose_records(const fs::path& path, const std::vector<PoseRecord>& records) {
  std::vector<std::string> lines;
  lines.reserve(records.size());
  for (const auto& r : records) {
    lines.push_back(format_pose_record(r));
  }
  write_lines(path, lines);
}

std::vector<PoseRecord> read_pose_records(const fs::path& path) {
  std::vector<PoseRecord> out;
  for (const auto& line : read_lines(path)) {
    out.push_back(parse_pose_record(line));
  }
  return out;
}

}  // namespace cano::io

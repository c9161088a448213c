#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cano/annotation_log.hpp"
#include "cano/error.hpp"

namespace cano::io::detail {

using nlohmann::json;

inline json parse_json(std::string_view text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, where + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kIo, where + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, where + ": field '" + key + "': " + e.what());
  }
}

inline json stats_json(const AnnotationStats& s) {
  json annotators = json::object();
  for (const auto& [id, a] : s.annotators) {
    annotators[id] = {{"count", a.count}, {"mean_elapsed_s", a.mean_elapsed_s}};
  }
  return {{"total", s.total},
          {"retained", s.retained},
          {"quality_discards", s.quality_discards},
          {"pose_discards", s.pose_discards},
          {"retained_pct", s.retained_pct},
          {"quality_discard_pct", s.quality_discard_pct},
          {"pose_discard_pct", s.pose_discard_pct},
          {"tag_counts", s.tag_counts},
          {"tag_pct", s.tag_pct},
          {"discard_reasons", s.discard_reasons},
          {"annotators", annotators}};
}

}  // namespace cano::io::detail

#include "config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cano/error.hpp"

namespace cano::cli {

io::LoadOptions Settings::load_options() const {
  io::LoadOptions o;
  o.sample_count = sample_count;
  o.seed = seed;
  return o;
}

PipelineConfig Settings::pipeline() const {
  PipelineConfig cfg;
  cfg.criteria.grid_step = deg2rad(grid_step_deg);
  cfg.criteria.refine = refine;
  cfg.criteria.refine_tolerance = deg2rad(refine_tolerance_deg);
  cfg.criteria.gaussian_sigma = sigma;
  cfg.criteria.max_search_points = max_search_points;
  if (!scorer_command.empty()) {
    cfg.scorer = std::make_shared<ExternalCommandScorer>(scorer_command);
  }
  return cfg;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  Settings s;
  try {
    const auto j = nlohmann::json::parse(ss.str());
    for (const auto& [key, value] : j.items()) {
      if (key == "sample_count") {
        s.sample_count = value.get<std::size_t>();
      } else if (key == "seed") {
        s.seed = value.get<std::uint64_t>();
      } else if (key == "grid_step_deg") {
        s.grid_step_deg = value.get<double>();
      } else if (key == "refine_tolerance_deg") {
        s.refine_tolerance_deg = value.get<double>();
      } else if (key == "refine") {
        s.refine = value.get<bool>();
      } else if (key == "sigma") {
        s.sigma = value.get<double>();
      } else if (key == "max_search_points") {
        s.max_search_points = value.get<std::size_t>();
      } else if (key == "lease_seconds") {
        s.lease_seconds = value.get<double>();
      } else if (key == "workers") {
        s.workers = value.get<std::size_t>();
      } else if (key == "scorer_command") {
        s.scorer_command = value.get<std::string>();
      } else {
        throw Error(ErrorCode::kInvalidInput, path.string() + ": unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, path.string() + ": " + e.what());
  }
  return s;
}

}  // namespace cano::cli

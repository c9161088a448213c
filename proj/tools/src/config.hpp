#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "cano/candidates.hpp"
#include "cano/mesh_io.hpp"

namespace cano::cli {

/// Settings shared by all subcommands. Loaded from a JSON config file, then
/// overridden by command-line flags.
struct Settings {
  std::size_t sample_count = kDefaultSampleCount;
  std::uint64_t seed = kDefaultSampleSeed;
  double grid_step_deg = 1.0;
  double refine_tolerance_deg = 0.05;
  bool refine = true;
  double sigma = 1.0;  // radians
  std::size_t max_search_points = CriterionConfig{}.max_search_points;
  double lease_seconds = 120.0;
  std::size_t workers = 1;
  std::string scorer_command;  // external upright scorer; heuristic when empty

  io::LoadOptions load_options() const;
  PipelineConfig pipeline() const;
};

/// Unknown keys are rejected so typos do not pass silently.
Settings load_settings(const std::filesystem::path& path);

}  // namespace cano::cli

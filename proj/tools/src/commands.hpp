#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace cano::cli {

namespace fs = std::filesystem;

struct PreprocessArgs {
  fs::path manifest;
  fs::path out_dir;
};

/// Normalizes every manifest object and writes clouds, labels, meshes and a
/// new manifest pointing at the normalized clouds.
int run_preprocess(const PreprocessArgs& args, const Settings& settings, std::ostream& log);

struct CandidatesArgs {
  fs::path manifest;
  fs::path templates;
  fs::path out;
};

int run_candidates(const CandidatesArgs& args, const Settings& settings, std::ostream& log);

struct ServeArgs {
  fs::path manifest;
  fs::path templates;
  fs::path log;
  std::optional<fs::path> candidates;  // generated at startup when absent
  std::optional<fs::path> static_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
};

int run_serve(const ServeArgs& args, const Settings& settings, std::ostream& log);

struct EvaluateArgs {
  fs::path predictions;
  fs::path ground_truth;
  std::optional<fs::path> manifest;   // with templates: per-category symmetry
  std::optional<fs::path> templates;
  std::optional<fs::path> report;
};

int run_evaluate(const EvaluateArgs& args, const Settings& settings, std::ostream& out);

struct ExportArgs {
  fs::path manifest;
  fs::path candidates;
  fs::path log;
  fs::path out_dir;
};

int run_export(const ExportArgs& args, const Settings& settings, std::ostream& out);

}  // namespace cano::cli

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cano/candidates.hpp"
#include "cano/mesh_io.hpp"
#include "cano/template.hpp"

namespace cano::io {

/// One line of an object manifest. Paths are resolved against the manifest's directory.
struct ObjectEntry {
  std::string id;
  std::string category;
  fs::path path;
  std::optional<fs::path> labels;

  bool operator==(const ObjectEntry&) const = default;
};

/// `{"objects": [{"id", "category", "path", "labels"?}, ...]}`. Ids must be unique.
std::vector<ObjectEntry> read_object_manifest(const fs::path& path);
/// Writes paths relative to the manifest's directory when possible.
void write_object_manifest(const fs::path& path, const std::vector<ObjectEntry>& entries);

/// Loads the entry's geometry and normalizes it to the unit sphere.
PreparedObject load_prepared_object(const ObjectEntry& entry, const LoadOptions& opts = {});

/// Template registry manifest:
///
///   {"templates": [{"category": "mug", "template_id": "mug-01", "path": "mug.obj",
///                   "labels": "mug.labels",                       (optional)
///                   "symmetry": "none" | {"kind": "discrete", "axis": [0,0,1], "angle": 90}
///                             | {"kind": "continuous", "axis": [0,0,1]},
///                   "axis_convention": "x = front, z = up"}]}
///
/// Template geometry is normalized to the unit sphere on load.
TemplateRegistry load_template_registry(const fs::path& path, const LoadOptions& opts = {});

struct TemplateEntry {
  std::string category;
  std::string template_id;
  fs::path path;
  std::optional<fs::path> labels;
  SymmetrySpec symmetry;
  std::string axis_convention;
};

void write_template_registry(const fs::path& path, const std::vector<TemplateEntry>& entries);

}  // namespace cano::io

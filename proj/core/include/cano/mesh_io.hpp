#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cano/cloud.hpp"
#include "cano/mesh.hpp"

namespace cano::io {

namespace fs = std::filesystem;

/// Raw contents of an OBJ or PLY file. `faces` is empty for point clouds.
struct GeometryFile {
  std::vector<Point3> vertices;
  std::vector<Eigen::Vector3d> colors;  // empty or one per vertex, in [0,1]
  std::vector<Face> faces;              // polygons fan-triangulated
};

GeometryFile read_obj(const fs::path& path);
GeometryFile read_ply(const fs::path& path);
/// Dispatches on the (case-insensitive) extension. Throws unsupported-format otherwise.
GeometryFile read_geometry(const fs::path& path);

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

void write_ply(const fs::path& path, const LabeledCloud& cloud, PlyEncoding enc = PlyEncoding::kAscii);
void write_ply(const fs::path& path, const Mesh& mesh, PlyEncoding enc = PlyEncoding::kAscii);

/// `.labels` sidecar: header line `parts: name1,name2,...` then one integer per line.
struct PartLabels {
  std::vector<std::string> part_names;
  std::vector<int> labels;
};

PartLabels read_labels(const fs::path& path);
void write_labels(const fs::path& path, const PartLabels& labels);
fs::path sidecar_path(const fs::path& geometry_path);

struct LoadOptions {
  std::size_t sample_count = kDefaultSampleCount;
  std::uint64_t seed = kDefaultSampleSeed;
  /// Overrides the default `<stem>.labels` sidecar lookup.
  std::optional<fs::path> labels_path;
};

struct LoadedObject {
  std::optional<Mesh> mesh;
  LabeledCloud cloud;
};

/// Loads a mesh (sampled to `sample_count` surface points) or a point cloud,
/// attaching sidecar labels when present. For meshes the sidecar holds one
/// label per face; for clouds one label per point. Throws io-error,
/// unsupported-format or label-count-mismatch naming the offending path.
LoadedObject load_object(const fs::path& path, const LoadOptions& opts = {});

}  // namespace cano::io

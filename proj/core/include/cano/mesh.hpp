#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cano/cloud.hpp"

namespace cano {

using Face = std::array<int, 3>;

/// Triangle mesh with optional per-face part labels and per-vertex colors.
struct Mesh {
  std::vector<Point3> vertices;
  std::vector<Face> faces;
  std::vector<int> face_labels;             // empty or one per face
  std::vector<Eigen::Vector3d> vertex_colors;  // empty or one per vertex
  std::vector<std::string> part_names;

  bool empty() const { return faces.empty(); }
  /// Throws invalid-input on out-of-range indices or inconsistent attribute arrays.
  void validate() const;
  double face_area(std::size_t f) const;
  double surface_area() const;
};

/// Merges exactly coincident vertices and drops zero-area faces.
Mesh clean_mesh(const Mesh& mesh);

/// True when the welded mesh has no boundary edges: every directed edge is
/// matched by an equal number of uses in the opposite direction.
bool is_watertight(const Mesh& mesh);

Mesh transform_mesh(const Mesh& mesh, const NormalizationTransform& t);
Mesh rotate_mesh(const Mesh& mesh, const Rotation& r);

/// Area-weighted uniform surface samples. Deterministic for a given seed on
/// every platform (the generator output is mapped to [0,1) by bit arithmetic,
/// not by a library distribution). Labels come from face labels, colors are
/// interpolated from vertex colors.
LabeledCloud sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed);

inline constexpr std::size_t kDefaultSampleCount = 4096;
inline constexpr std::uint64_t kDefaultSampleSeed = 0x5eed;

enum class MassEstimator { kSolid, kSurface };

struct CenterOfMass {
  Point3 point = Point3::Zero();
  MassEstimator estimator = MassEstimator::kSolid;
  double volume = 0.0;  // enclosed volume on the solid path, 0 otherwise
};

/// Uniform-density solid centroid for closed meshes (signed-tetrahedron
/// integration); area-weighted surface centroid for open meshes or when the
/// enclosed volume vanishes. Throws invalid-input on an empty mesh.
CenterOfMass center_of_mass(const Mesh& mesh);

}  // namespace cano

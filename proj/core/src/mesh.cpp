#include "cano/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <Eigen/Geometry>

#include "cano/error.hpp"

namespace cano {

void Mesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& f : faces) {
    for (const int v : f) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::kInvalidInput, "face index " + std::to_string(v) + " out of range");
      }
    }
  }
  if (!face_labels.empty()) {
    if (face_labels.size() != faces.size()) {
      throw Error(ErrorCode::kInvalidInput, "face label count does not match face count");
    }
    for (const int l : face_labels) {
      if (l < 0 || l >= static_cast<int>(part_names.size())) {
        throw Error(ErrorCode::kInvalidInput, "face label outside part range");
      }
    }
  }
  if (!vertex_colors.empty() && vertex_colors.size() != vertices.size()) {
    throw Error(ErrorCode::kInvalidInput, "vertex color count does not match vertex count");
  }
}

double Mesh::face_area(std::size_t f) const {
  const auto& [a, b, c] = faces[f];
  return 0.5 * (vertices[b] - vertices[a]).cross(vertices[c] - vertices[a]).norm();
}

double Mesh::surface_area() const {
  double total = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    total += face_area(f);
  }
  return total;
}

Mesh clean_mesh(const Mesh& mesh) {
  mesh.validate();
  Mesh out;
  out.part_names = mesh.part_names;
  std::map<std::tuple<double, double, double>, int> index;
  std::vector<int> remap(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& p = mesh.vertices[i];
    const auto key = std::make_tuple(p.x(), p.y(), p.z());
    auto [it, inserted] = index.emplace(key, static_cast<int>(out.vertices.size()));
    if (inserted) {
      out.vertices.push_back(p);
      if (!mesh.vertex_colors.empty()) {
        out.vertex_colors.push_back(mesh.vertex_colors[i]);
      }
    }
    remap[i] = it->second;
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face face{remap[mesh.faces[f][0]], remap[mesh.faces[f][1]], remap[mesh.faces[f][2]]};
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      continue;
    }
    const auto& a = out.vertices[face[0]];
    const double area2 = (out.vertices[face[1]] - a).cross(out.vertices[face[2]] - a).norm();
    if (!(area2 > 0.0)) {
      continue;
    }
    out.faces.push_back(face);
    if (!mesh.face_labels.empty()) {
      out.face_labels.push_back(mesh.face_labels[f]);
    }
  }
  return out;
}

bool is_watertight(const Mesh& mesh) {
  const Mesh welded = clean_mesh(mesh);
  if (welded.faces.empty()) {
    return false;
  }
  // Closed iff every directed edge a->b is matched by as many b->a uses, which
  // also admits unions of closed components that share edges.
  std::map<std::pair<int, int>, int> balance;
  for (const auto& f : welded.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k];
      const int b = f[(k + 1) % 3];
      balance[{std::min(a, b), std::max(a, b)}] += a < b ? 1 : -1;
    }
  }
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
}

Mesh transform_mesh(const Mesh& mesh, const NormalizationTransform& t) {
  Mesh out = mesh;
  for (auto& v : out.vertices) {
    v = t.apply(v);
  }
  return out;
}

Mesh rotate_mesh(const Mesh& mesh, const Rotation& r) {
  Mesh out = mesh;
  out.vertices = rotate_points(mesh.vertices, r);
  return out;
}

namespace {

// splitmix64-seeded xorshift-style generator with a fixed mapping to [0,1).
class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed) : state_(seed) {}

  double next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace

LabeledCloud sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed) {
  mesh.validate();
  if (mesh.faces.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cannot sample a mesh without faces");
  }
  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.face_area(f);
    cumulative[f] = total;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "mesh has zero surface area");
  }
  LabeledCloud cloud;
  cloud.part_names = mesh.part_names;
  cloud.points.reserve(count);
  UnitSampler rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = rng.next() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) {
      --it;
    }
    const auto f = static_cast<std::size_t>(it - cumulative.begin());
    double u = rng.next();
    double v = rng.next();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const auto& [a, b, c] = mesh.faces[f];
    const double w = 1.0 - u - v;
    cloud.points.push_back(w * mesh.vertices[a] + u * mesh.vertices[b] + v * mesh.vertices[c]);
    if (!mesh.vertex_colors.empty()) {
      cloud.colors.push_back(w * mesh.vertex_colors[a] + u * mesh.vertex_colors[b] +
                             v * mesh.vertex_colors[c]);
    }
    if (!mesh.face_labels.empty()) {
      cloud.labels.push_back(mesh.face_labels[f]);
    }
  }
  return cloud;
}

CenterOfMass center_of_mass(const Mesh& mesh) {
  if (mesh.faces.empty()) {
    throw Error(ErrorCode::kInvalidInput, "center of mass of an empty mesh");
  }
  const Mesh m = clean_mesh(mesh);
  if (m.faces.empty()) {
    throw Error(ErrorCode::kDegenerateGeometry, "mesh has no non-degenerate faces");
  }
  CenterOfMass com;
  if (is_watertight(m)) {
    double volume = 0.0;
    Point3 weighted = Point3::Zero();
    for (const auto& [a, b, c] : m.faces) {
      const Point3& p0 = m.vertices[a];
      const Point3& p1 = m.vertices[b];
      const Point3& p2 = m.vertices[c];
      const double v = p0.dot(p1.cross(p2)) / 6.0;
      volume += v;
      weighted += v * (p0 + p1 + p2) / 4.0;
    }
    Eigen::Vector3d lo = m.vertices.front();
    Eigen::Vector3d hi = m.vertices.front();
    for (const auto& p : m.vertices) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double diag = (hi - lo).norm();
    if (std::abs(volume) > 1e-12 * diag * diag * diag) {
      com.point = weighted / volume;
      com.volume = std::abs(volume);
      com.estimator = MassEstimator::kSolid;
      return com;
    }
  }
  double area = 0.0;
  Point3 weighted = Point3::Zero();
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    const double a = m.face_area(f);
    const auto& [i, j, k] = m.faces[f];
    area += a;
    weighted += a * (m.vertices[i] + m.vertices[j] + m.vertices[k]) / 3.0;
  }
  com.point = weighted / area;
  com.estimator = MassEstimator::kSurface;
  return com;
}

}  // namespace cano

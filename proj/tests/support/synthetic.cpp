#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "cano/stability.hpp"

namespace cano::testing {

Mesh box(const Eigen::Vector3d& c, const Eigen::Vector3d& h) {
  Mesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back(c.x() + ((i & 1) ? h.x() : -h.x()), c.y() + ((i & 2) ? h.y() : -h.y()),
                            c.z() + ((i & 4) ? h.z() : -h.z()));
  }
  // Quads listed counter-clockwise seen from outside.
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  return m;
}

Mesh cylinder(const Eigen::Vector3d& base, double radius, double height, int segments) {
  Mesh m;
  for (int k = 0; k < segments; ++k) {
    const double a = 2.0 * std::numbers::pi * k / segments;
    m.vertices.emplace_back(base.x() + radius * std::cos(a), base.y() + radius * std::sin(a), base.z());
    m.vertices.emplace_back(base.x() + radius * std::cos(a), base.y() + radius * std::sin(a), base.z() + height);
  }
  const int bottom = static_cast<int>(m.vertices.size());
  m.vertices.push_back(base);
  m.vertices.push_back(base + Eigen::Vector3d(0, 0, height));
  const int top = bottom + 1;
  for (int k = 0; k < segments; ++k) {
    const int a0 = 2 * k, a1 = 2 * k + 1;
    const int b0 = 2 * ((k + 1) % segments), b1 = b0 + 1;
    m.faces.push_back({a0, b0, b1});
    m.faces.push_back({a0, b1, a1});
    m.faces.push_back({bottom, b0, a0});
    m.faces.push_back({top, a1, b1});
  }
  return m;
}

Mesh cylinder_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double radius, int segments) {
  const Eigen::Vector3d d = b - a;
  Mesh m = cylinder(Eigen::Vector3d::Zero(), radius, d.norm(), segments);
  const Rotation r = Rotation::between(Eigen::Vector3d::UnitZ(), d.normalized());
  for (auto& v : m.vertices) {
    v = r * v + a;
  }
  return m;
}

Mesh regular_tetrahedron() {
  Mesh m;
  m.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

MeshBuilder& MeshBuilder::add(const std::string& part, const Mesh& piece) {
  auto it = std::find(mesh_.part_names.begin(), mesh_.part_names.end(), part);
  const int label = static_cast<int>(it - mesh_.part_names.begin());
  if (it == mesh_.part_names.end()) {
    mesh_.part_names.push_back(part);
  }
  const int offset = static_cast<int>(mesh_.vertices.size());
  mesh_.vertices.insert(mesh_.vertices.end(), piece.vertices.begin(), piece.vertices.end());
  for (const auto& f : piece.faces) {
    mesh_.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    mesh_.face_labels.push_back(label);
  }
  return *this;
}

Mesh chair_mesh() {
  // Low lounge chair with splayed legs and a short backrest at -x.
  MeshBuilder b;
  b.add("seat", box({0.0, 0.0, 0.30}, {0.40, 0.35, 0.05}));
  for (const double x : {-0.40, 0.40}) {
    for (const double y : {-0.34, 0.34}) {
      b.add("leg", box({x, y, 0.125}, {0.04, 0.04, 0.125}));
    }
  }
  b.add("back", box({-0.36, 0.0, 0.50}, {0.04, 0.35, 0.15}));
  return b.build();
}

Mesh camera_mesh() {
  MeshBuilder b;
  b.add("body", box({0.0, 0.0, 0.12}, {0.30, 0.20, 0.12}));
  b.add("lens", cylinder_between({0.30, 0.03, 0.12}, {0.48, 0.03, 0.12}, 0.09));
  b.add("viewfinder", box({-0.12, -0.08, 0.28}, {0.08, 0.06, 0.04}));
  b.add("grip", box({0.18, 0.21, 0.12}, {0.07, 0.03, 0.11}));
  return b.build();
}

Mesh mug_mesh() {
  MeshBuilder b;
  b.add("body", cylinder({0.0, 0.0, 0.0}, 0.30, 0.55, 32));
  b.add("foot", cylinder({0.0, 0.0, 0.0}, 0.33, 0.04, 32));
  b.add("handle", box({0.36, 0.0, 0.30}, {0.06, 0.03, 0.16}));
  b.add("handle", box({0.33, 0.0, 0.46}, {0.04, 0.03, 0.03}));
  b.add("handle", box({0.33, 0.0, 0.14}, {0.04, 0.03, 0.03}));
  return b.build();
}

Mesh car_mesh() {
  MeshBuilder b;
  b.add("body", box({0.0, 0.0, 0.22}, {0.50, 0.22, 0.10}));
  b.add("cabin", box({-0.10, 0.0, 0.40}, {0.24, 0.19, 0.08}));
  b.add("spoiler", box({-0.46, 0.0, 0.36}, {0.04, 0.20, 0.02}));
  for (const double x : {-0.32, 0.32}) {
    for (const double y : {-0.20, 0.20}) {
      const double s = y > 0 ? 1.0 : -1.0;
      b.add("wheel", cylinder_between({x, y, 0.09}, {x, y + 0.05 * s, 0.09}, 0.09, 16));
    }
  }
  return b.build();
}

Mesh lamp_mesh() {
  MeshBuilder b;
  b.add("base", cylinder({0.0, 0.0, 0.0}, 0.28, 0.06, 32));
  b.add("pole", cylinder({-0.12, 0.0, 0.06}, 0.025, 0.55, 12));
  b.add("arm", cylinder_between({-0.12, 0.0, 0.60}, {0.22, 0.0, 0.52}, 0.02, 12));
  b.add("shade", cylinder({0.22, 0.0, 0.36}, 0.12, 0.16, 24));
  return b.build();
}

Mesh shoe_mesh() {
  MeshBuilder b;
  b.add("sole", box({0.0, 0.0, 0.03}, {0.50, 0.17, 0.03}));
  b.add("toe", box({0.33, 0.0, 0.11}, {0.17, 0.15, 0.05}));
  b.add("upper", box({-0.12, 0.0, 0.16}, {0.30, 0.16, 0.10}));
  b.add("heel", box({-0.42, 0.0, 0.26}, {0.06, 0.15, 0.06}));
  return b.build();
}

std::vector<NamedMesh> asymmetric_categories() {
  return {{"chair", chair_mesh()}, {"camera", camera_mesh()}, {"shoe", shoe_mesh()},
          {"car", car_mesh()},     {"lamp", lamp_mesh()}};
}

CategoryTemplate make_template(const std::string& category, const Mesh& mesh, std::size_t samples,
                               std::uint64_t seed, SymmetrySpec symmetry) {
  const LabeledCloud cloud = sample_surface(mesh, samples, seed);
  PreparedObject p = prepare_object(category, category, mesh, cloud);
  CategoryTemplate t;
  t.category = category;
  t.template_id = category + "-synthetic";
  t.cloud = std::move(p.cloud);
  t.mesh = std::move(p.mesh);
  t.symmetry = symmetry;
  t.axis_convention = "x = front, z = up";
  return t;
}

std::vector<Point3> lattice_box(double hx, double hy, double hz, int nx, int ny, int nz) {
  std::vector<Point3> out;
  auto coord = [](double h, int n, int i) { return n == 1 ? 0.0 : -h + 2.0 * h * i / (n - 1); };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        out.emplace_back(coord(hx, nx, i), coord(hy, ny, j), coord(hz, nz, k));
      }
    }
  }
  return out;
}

std::vector<Point3> random_points(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point3> out(n);
  for (auto& p : out) {
    const double x = u(rng), y = u(rng), z = u(rng);
    p = Point3(x, y, z);
  }
  return out;
}

PosedInstance make_posed_instance(const std::string& id, const CategoryTemplate& tmpl, std::size_t template_index,
                                  const Rotation& pose, std::size_t samples, std::uint64_t seed) {
  const Mesh posed = rotate_mesh(*tmpl.mesh, pose);
  const LabeledCloud cloud = sample_surface(posed, samples, seed);
  PosedInstance inst;
  inst.id = id;
  inst.template_index = template_index;
  inst.pose = pose;
  inst.object = prepare_object(id, tmpl.category, posed, cloud);
  return inst;
}

std::vector<PosedInstance> posed_suite(const std::vector<CategoryTemplate>& templates, std::size_t count,
                                       std::uint64_t seed, std::size_t samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> yaw(0.0, 2.0 * std::numbers::pi);
  std::vector<std::vector<SupportCandidate>> tips(templates.size());
  for (std::size_t t = 0; t < templates.size(); ++t) {
    for (const auto& c : support_candidates(*templates[t].mesh)) {
      // Skip the resting facet (normal already pointing down).
      if (c.stable && c.facet_normal.z() > -0.99) {
        tips[t].push_back(c);
      }
    }
  }
  std::vector<PosedInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t t = i % templates.size();
    Rotation pose = Rotation::about_z(yaw(rng));
    const bool tip = (i / templates.size()) % 2 == 1 && !tips[t].empty();
    if (tip) {
      std::uniform_int_distribution<std::size_t> pick(0, tips[t].size() - 1);
      pose = pose * tips[t][pick(rng)].rotation;
    }
    PosedInstance inst = make_posed_instance(templates[t].category + "-" + std::to_string(i), templates[t], t, pose,
                                             samples, seed * 1000003ULL + i);
    inst.tipped = tip;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace cano::testing

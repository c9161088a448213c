#include "cano/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Geometry>

#include "cano/error.hpp"

namespace cano {

namespace {

struct WorkFace {
  std::array<int, 3> v;
  Eigen::Vector3d normal;
  double offset;
  std::vector<int> outside;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

class Quickhull {
 public:
  explicit Quickhull(std::vector<Point3> pts) : pts_(std::move(pts)) {}

  ConvexHull run() {
    Eigen::Vector3d lo = pts_.front();
    Eigen::Vector3d hi = pts_.front();
    for (const auto& p : pts_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double diag = (hi - lo).norm();
    eps_ = 1e-9 * std::max(diag, 1e-300);
    if (!(diag > 0.0)) {
      throw Error(ErrorCode::kDegenerateGeometry, "convex hull of coincident points");
    }
    initial_simplex();
    while (true) {
      int f = -1;
      for (int i = 0; i < static_cast<int>(faces_.size()); ++i) {
        if (faces_[i].alive && !faces_[i].outside.empty()) {
          f = i;
          break;
        }
      }
      if (f < 0) {
        break;
      }
      add_point(f);
    }
    ConvexHull hull;
    hull.points = pts_;
    for (const auto& face : faces_) {
      if (!face.alive) {
        continue;
      }
      const Point3& a = pts_[face.v[0]];
      const double area = 0.5 * (pts_[face.v[1]] - a).cross(pts_[face.v[2]] - a).norm();
      hull.facets.push_back({face.v, face.normal, face.offset, area});
    }
    return hull;
  }

 private:
  double dist(const WorkFace& f, int p) const { return f.normal.dot(pts_[p]) - f.offset; }

  int make_face(int a, int b, int c) {
    WorkFace f;
    f.v = {a, b, c};
    const Eigen::Vector3d n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    f.normal = n.normalized();
    f.offset = f.normal.dot(pts_[a]);
    faces_.push_back(std::move(f));
    const int id = static_cast<int>(faces_.size()) - 1;
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
    return id;
  }

  void initial_simplex() {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) {
      throw Error(ErrorCode::kDegenerateGeometry, "convex hull needs at least 4 points");
    }
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
      if (pts_[i].x() < pts_[i0].x()) {
        i0 = i;
      }
    }
    int i1 = -1;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = (pts_[i] - pts_[i0]).squaredNorm();
      if (d > best) {
        best = d;
        i1 = i;
      }
    }
    const Eigen::Vector3d dir = (pts_[i1] - pts_[i0]).normalized();
    int i2 = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = (pts_[i] - pts_[i0]).cross(dir).norm();
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (i2 < 0 || best <= eps_) {
      throw Error(ErrorCode::kDegenerateGeometry, "all points are collinear");
    }
    const Eigen::Vector3d pn = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    int i3 = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(pn.dot(pts_[i] - pts_[i0]));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (i3 < 0 || best <= eps_) {
      throw Error(ErrorCode::kDegenerateGeometry, "all points are coplanar");
    }
    // Orient so that every face normal points away from the fourth vertex.
    if (pn.dot(pts_[i3] - pts_[i0]) > 0.0) {
      std::swap(i1, i2);
    }
    make_face(i0, i1, i2);
    make_face(i0, i3, i1);
    make_face(i1, i3, i2);
    make_face(i2, i3, i0);
    for (int p = 0; p < n; ++p) {
      if (p == i0 || p == i1 || p == i2 || p == i3) {
        continue;
      }
      assign(p, 0, static_cast<int>(faces_.size()));
    }
  }

  void assign(int p, int first_face, int end_face) {
    for (int f = first_face; f < end_face; ++f) {
      if (faces_[f].alive && dist(faces_[f], p) > eps_) {
        faces_[f].outside.push_back(p);
        return;
      }
    }
  }

  void add_point(int start) {
    WorkFace& sf = faces_[start];
    int eye = sf.outside.front();
    double far = dist(sf, eye);
    for (const int p : sf.outside) {
      const double d = dist(sf, p);
      if (d > far) {
        far = d;
        eye = p;
      }
    }
    // Visible region: connected faces that see the eye point.
    std::vector<int> visible{start};
    std::unordered_set<int> visible_set{start};
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const WorkFace& f = faces_[visible[k]];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e];
        const int b = f.v[(e + 1) % 3];
        const auto it = edges_.find(edge_key(b, a));
        if (it == edges_.end()) {
          continue;
        }
        const int g = it->second;
        if (!visible_set.count(g) && dist(faces_[g], eye) > eps_) {
          visible_set.insert(g);
          visible.push_back(g);
        }
      }
    }
    std::vector<std::pair<int, int>> horizon;
    std::vector<int> orphans;
    for (const int fi : visible) {
      const WorkFace& f = faces_[fi];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e];
        const int b = f.v[(e + 1) % 3];
        const auto it = edges_.find(edge_key(b, a));
        if (it == edges_.end() || !visible_set.count(it->second)) {
          horizon.emplace_back(a, b);
        }
      }
      for (const int p : f.outside) {
        if (p != eye) {
          orphans.push_back(p);
        }
      }
    }
    for (const int fi : visible) {
      WorkFace& f = faces_[fi];
      f.alive = false;
      f.outside.clear();
      for (int e = 0; e < 3; ++e) {
        const auto key = edge_key(f.v[e], f.v[(e + 1) % 3]);
        const auto it = edges_.find(key);
        if (it != edges_.end() && it->second == fi) {
          edges_.erase(it);
        }
      }
    }
    const int first_new = static_cast<int>(faces_.size());
    for (const auto& [a, b] : horizon) {
      make_face(a, b, eye);
    }
    const int end_new = static_cast<int>(faces_.size());
    for (const int p : orphans) {
      assign(p, first_new, end_new);
    }
  }

  std::vector<Point3> pts_;
  std::vector<WorkFace> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
  double eps_ = 0.0;
};

}  // namespace

ConvexHull convex_hull(const std::vector<Point3>& points) {
  std::vector<Point3> unique;
  std::set<std::tuple<double, double, double>> seen;
  for (const auto& p : points) {
    if (seen.emplace(p.x(), p.y(), p.z()).second) {
      unique.push_back(p);
    }
  }
  if (unique.size() < 4) {
    throw Error(ErrorCode::kDegenerateGeometry, "convex hull needs at least 4 distinct points");
  }
  return Quickhull(std::move(unique)).run();
}

std::vector<Point2> convex_hull_2d(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  double scale = 0.0;
  for (const auto& p : pts) {
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  }
  const double tol = 1e-12 * std::max(scale * scale, 1e-300);
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= tol) {
      --k;
    }
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= tol) {
      --k;
    }
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double signed_boundary_distance(const std::vector<Point2>& poly, const Point2& p) {
  if (poly.size() < 3) {
    return -std::numeric_limits<double>::infinity();
  }
  bool inside = true;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    const Point2 ab = b - a;
    const Point2 ap = p - a;
    const double len2 = ab.squaredNorm();
    const double t = std::clamp(ap.dot(ab) / len2, 0.0, 1.0);
    nearest = std::min(nearest, (ap - t * ab).norm());
    if (ab.x() * ap.y() - ab.y() * ap.x() < 0.0) {
      inside = false;
    }
  }
  return inside ? nearest : -nearest;
}

}  // namespace cano

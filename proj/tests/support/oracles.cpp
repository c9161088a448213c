#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/QR>

namespace cano::testing {

double brute_nearest_sq(const std::vector<Point3>& target, const Point3& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : target) {
    const double dx = q.x() - t.x();
    const double dy = q.y() - t.y();
    const double dz = q.z() - t.z();
    best = std::min(best, dx * dx + dy * dy + dz * dz);
  }
  return best;
}

double brute_chamfer(const std::vector<Point3>& a, const std::vector<Point3>& b) {
  double sa = 0.0;
  for (const auto& p : a) sa += brute_nearest_sq(b, p);
  double sb = 0.0;
  for (const auto& p : b) sb += brute_nearest_sq(a, p);
  return sa / static_cast<double>(a.size()) + sb / static_cast<double>(b.size());
}

std::vector<Point3> oracle_rotate(const std::vector<Point3>& points, const Rotation& r) {
  // Same entry formulas and dot-product order as the library so results agree
  // bitwise; derived here from the quaternion independently.
  const auto [w, x, y, z] = r.wxyz();
  if (w == 1.0 && x == 0.0 && y == 0.0 && z == 0.0) return points;
  const double xx = x * x, yy = y * y, zz = z * z;
  const double xy = x * y, xz = x * z, yz = y * z;
  const double wx = w * x, wy = w * y, wz = w * z;
  const double m00 = 1.0 - 2.0 * (yy + zz), m01 = 2.0 * (xy - wz), m02 = 2.0 * (xz + wy);
  const double m10 = 2.0 * (xy + wz), m11 = 1.0 - 2.0 * (xx + zz), m12 = 2.0 * (yz - wx);
  const double m20 = 2.0 * (xz - wy), m21 = 2.0 * (yz + wx), m22 = 1.0 - 2.0 * (xx + yy);
  std::vector<Point3> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.emplace_back(m00 * p.x() + m01 * p.y() + m02 * p.z(), m10 * p.x() + m11 * p.y() + m12 * p.z(),
                     m20 * p.x() + m21 * p.y() + m22 * p.z());
  }
  return out;
}

double brute_semantic_cost(const std::vector<PartPair>& parts, const Rotation& r) {
  double sum = 0.0;
  for (const auto& p : parts) sum += brute_chamfer(p.template_points, oracle_rotate(p.object_points, r));
  return sum / static_cast<double>(parts.size());
}

namespace {

// Moller-Trumbore along a fixed, slightly skewed direction to avoid edge hits.
bool ray_hits(const Point3& o, const Eigen::Vector3d& d, const Point3& a, const Point3& b, const Point3& c) {
  const Eigen::Vector3d e1 = b - a, e2 = c - a;
  const Eigen::Vector3d p = d.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14) return false;
  const double inv = 1.0 / det;
  const Eigen::Vector3d s = o - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Eigen::Vector3d q = s.cross(e1);
  const double v = d.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  return e2.dot(q) * inv > 0.0;
}

}  // namespace

bool inside_mesh(const Mesh& mesh, const Point3& p) {
  const Eigen::Vector3d dir = Eigen::Vector3d(0.5377, 0.3119, 0.7833).normalized();
  int hits = 0;
  for (const auto& f : mesh.faces) {
    if (ray_hits(p, dir, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]])) ++hits;
  }
  return hits % 2 == 1;
}

Point3 monte_carlo_centroid(const Mesh& mesh, std::size_t samples, std::uint64_t seed) {
  Eigen::Vector3d lo = mesh.vertices.front(), hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  std::size_t n = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Point3 p(lo.x() + u(rng) * (hi.x() - lo.x()), lo.y() + u(rng) * (hi.y() - lo.y()),
                   lo.z() + u(rng) * (hi.z() - lo.z()));
    if (inside_mesh(mesh, p)) {
      sum += p;
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

bool point_in_polygon(const std::vector<Point2>& poly, const Point2& p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double haar_angle_cdf(double eps) { return (eps - std::sin(eps)) / std::numbers::pi; }

double haar_mean_pairwise_angle_mc(std::size_t pairs, std::uint64_t seed) {
  // Random rotations from Gaussian 3x3 matrices via QR, then the relative angle
  // by the trace formula. Shares no code with the library.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&] {
    Eigen::Matrix3d a;
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = g(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
    Eigen::Matrix3d q = qr.householderQ();
    const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 3; ++i) {
      if (r(i, i) < 0) q.col(i) = -q.col(i);
    }
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    return q;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    sum += trace_angle_deg(draw(), draw()) * std::numbers::pi / 180.0;
  }
  return sum / static_cast<double>(pairs);
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double radians) {
  const Eigen::Vector3d k = axis.normalized();
  Eigen::Matrix3d kx;
  kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(radians) * kx + (1.0 - std::cos(radians)) * kx * kx;
}

double trace_angle_deg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

}  // namespace cano::testing

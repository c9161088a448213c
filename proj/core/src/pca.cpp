#include "cano/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "cano/error.hpp"

namespace cano {

namespace {

Eigen::Vector3d orient_axis(Eigen::Vector3d v, const std::vector<Point3>& points, const Point3& c) {
  double m3 = 0.0;
  double m3_abs = 0.0;
  for (const auto& p : points) {
    const double t = v.dot(p - c);
    m3 += t * t * t;
    m3_abs += std::abs(t * t * t);
  }
  if (std::abs(m3) > 1e-9 * m3_abs) {
    return m3 < 0.0 ? Eigen::Vector3d(-v) : v;
  }
  for (int k = 0; k < 3; ++k) {
    if (std::abs(v[k]) > 1e-12) {
      return v[k] < 0.0 ? Eigen::Vector3d(-v) : v;
    }
  }
  return v;
}

}  // namespace

PcaFrame principal_axes(const std::vector<Point3>& points, double gap_tolerance) {
  if (points.size() < 4) {
    throw Error(ErrorCode::kInvalidInput, "principal axes need at least 4 points");
  }
  const Point3 c = centroid(points);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - c;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateGeometry, "covariance eigendecomposition failed");
  }
  // Eigen returns ascending order.
  const Eigen::Vector3d ev = solver.eigenvalues();
  PcaFrame frame;
  frame.eigvals = {std::max(ev[2], 0.0), std::max(ev[1], 0.0), std::max(ev[0], 0.0)};
  frame.v1 = orient_axis(solver.eigenvectors().col(2).normalized(), points, c);
  frame.v2 = orient_axis(solver.eigenvectors().col(1).normalized(), points, c);

  const double l1 = frame.eigvals[0];
  if (!(l1 > 0.0)) {
    frame.degenerate = true;
  } else {
    const double gap12 = (frame.eigvals[0] - frame.eigvals[1]) / l1;
    const double gap23 = (frame.eigvals[1] - frame.eigvals[2]) / l1;
    frame.degenerate = gap12 < gap_tolerance || gap23 < gap_tolerance;
  }
  return frame;
}

PcaFrame principal_axes(const LabeledCloud& cloud, double gap_tolerance) {
  return principal_axes(cloud.points, gap_tolerance);
}

}  // namespace cano

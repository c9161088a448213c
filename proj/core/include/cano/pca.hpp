#pragma once

#include <array>

#include "cano/cloud.hpp"

namespace cano {

/// Principal frame of a centered cloud.
///
/// `v1`, `v2` are the eigenvectors of the two largest covariance eigenvalues.
/// Each axis is oriented so the third moment of the cloud projected on it is
/// non-negative; when that moment vanishes the first nonzero component is made
/// positive. `eigvals` holds all three eigenvalues, descending.
struct PcaFrame {
  Eigen::Vector3d v1 = Eigen::Vector3d::UnitX();
  Eigen::Vector3d v2 = Eigen::Vector3d::UnitY();
  std::array<double, 3> eigvals{};
  /// Set when an eigengap (relative to the largest eigenvalue) falls below the
  /// tolerance, i.e. the first two axes are not uniquely defined.
  bool degenerate = false;
};

inline constexpr double kDefaultPcaGapTolerance = 1e-3;

/// Throws invalid-input for fewer than 4 points.
PcaFrame principal_axes(const LabeledCloud& cloud, double gap_tolerance = kDefaultPcaGapTolerance);
PcaFrame principal_axes(const std::vector<Point3>& points, double gap_tolerance = kDefaultPcaGapTolerance);

}  // namespace cano

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cano/rotation.hpp"

namespace cano {

using Point3 = Eigen::Vector3d;

/// Points with optional per-point colors, part labels and part vocabulary.
///
/// `colors` and `labels` are either empty or the same length as `points`.
/// Labels index into `part_names`.
struct LabeledCloud {
  std::vector<Point3> points;
  std::vector<Eigen::Vector3d> colors;
  std::vector<int> labels;
  std::vector<std::string> part_names;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_labels() const { return !labels.empty(); }
  bool has_colors() const { return !colors.empty(); }

  /// Throws invalid-input when the per-point arrays or label indices are inconsistent.
  void validate() const;

  /// Points carrying label `part`, in cloud order.
  std::vector<Point3> part_points(int part) const;
};

/// p' = (p - translation) * scale
struct NormalizationTransform {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double scale = 1.0;

  Point3 apply(const Point3& p) const { return (p - translation) * scale; }
  Point3 invert(const Point3& p) const { return p / scale + translation; }
};

/// Centers the cloud on its centroid and scales the farthest point to radius 1.
///
/// Throws invalid-input on an empty cloud and degenerate-geometry when all
/// points coincide.
std::pair<LabeledCloud, NormalizationTransform> normalize_to_unit_sphere(const LabeledCloud& cloud);

LabeledCloud apply_transform(const LabeledCloud& cloud, const NormalizationTransform& t);

LabeledCloud rotate(const LabeledCloud& cloud, const Rotation& r);
std::vector<Point3> rotate_points(const std::vector<Point3>& points, const Rotation& r);

/// Deterministic stride subsample to at most `max_points` points (all
/// per-point attributes carried along). Returns the cloud unchanged if small enough.
LabeledCloud subsample(const LabeledCloud& cloud, std::size_t max_points);

Point3 centroid(const std::vector<Point3>& points);

}  // namespace cano

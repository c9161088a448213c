#include "cano/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cano/error.hpp"

namespace cano {

void LabeledCloud::validate() const {
  if (!colors.empty() && colors.size() != points.size()) {
    throw Error(ErrorCode::kInvalidInput, "colors length " + std::to_string(colors.size()) +
                                              " != points length " + std::to_string(points.size()));
  }
  if (!labels.empty()) {
    if (labels.size() != points.size()) {
      throw Error(ErrorCode::kInvalidInput, "labels length " + std::to_string(labels.size()) +
                                                " != points length " + std::to_string(points.size()));
    }
    const int m = static_cast<int>(part_names.size());
    for (const int l : labels) {
      if (l < 0 || l >= m) {
        throw Error(ErrorCode::kInvalidInput,
                    "label " + std::to_string(l) + " outside part range [0, " + std::to_string(m) + ")");
      }
    }
  }
}

std::vector<Point3> LabeledCloud::part_points(int part) const {
  std::vector<Point3> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == part) {
      out.push_back(points[i]);
    }
  }
  return out;
}

Point3 centroid(const std::vector<Point3>& points) {
  Point3 c = Point3::Zero();
  for (const auto& p : points) {
    c += p;
  }
  return c / static_cast<double>(points.size());
}

std::pair<LabeledCloud, NormalizationTransform> normalize_to_unit_sphere(const LabeledCloud& cloud) {
  if (cloud.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cannot normalize an empty cloud");
  }
  cloud.validate();
  NormalizationTransform t;
  t.translation = centroid(cloud.points);
  double max_r = 0.0;
  for (const auto& p : cloud.points) {
    max_r = std::max(max_r, (p - t.translation).norm());
  }
  if (!(max_r > 0.0) || !std::isfinite(max_r)) {
    throw Error(ErrorCode::kDegenerateGeometry, "all points coincide; scale is undefined");
  }
  t.scale = 1.0 / max_r;
  return {apply_transform(cloud, t), t};
}

LabeledCloud apply_transform(const LabeledCloud& cloud, const NormalizationTransform& t) {
  LabeledCloud out = cloud;
  for (auto& p : out.points) {
    p = t.apply(p);
  }
  return out;
}

std::vector<Point3> rotate_points(const std::vector<Point3>& points, const Rotation& r) {
  if (r == Rotation()) {
    return points;
  }
  const Eigen::Matrix3d m = r.matrix();
  std::vector<Point3> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point3& p = points[i];
    out[i] = Point3(m(0, 0) * p.x() + m(0, 1) * p.y() + m(0, 2) * p.z(),
                    m(1, 0) * p.x() + m(1, 1) * p.y() + m(1, 2) * p.z(),
                    m(2, 0) * p.x() + m(2, 1) * p.y() + m(2, 2) * p.z());
  }
  return out;
}

LabeledCloud rotate(const LabeledCloud& cloud, const Rotation& r) {
  LabeledCloud out = cloud;
  out.points = rotate_points(cloud.points, r);
  return out;
}

LabeledCloud subsample(const LabeledCloud& cloud, std::size_t max_points) {
  const std::size_t n = cloud.size();
  if (max_points == 0 || n <= max_points) {
    return cloud;
  }
  LabeledCloud out;
  out.part_names = cloud.part_names;
  out.points.reserve(max_points);
  for (std::size_t k = 0; k < max_points; ++k) {
    const std::size_t i = k * n / max_points;
    out.points.push_back(cloud.points[i]);
    if (cloud.has_colors()) {
      out.colors.push_back(cloud.colors[i]);
    }
    if (cloud.has_labels()) {
      out.labels.push_back(cloud.labels[i]);
    }
  }
  return out;
}

}  // namespace cano

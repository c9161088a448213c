#include "cano/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "cano/error.hpp"

namespace cano {

SymmetrySpec SymmetrySpec::discrete(const Eigen::Vector3d& axis, double angle_deg) {
  SymmetrySpec s{SymmetryKind::kDiscrete, axis.normalized(), angle_deg};
  s.validate();
  return s;
}

SymmetrySpec SymmetrySpec::continuous(const Eigen::Vector3d& axis) {
  SymmetrySpec s{SymmetryKind::kContinuous, axis.normalized(), 0.0};
  s.validate();
  return s;
}

void SymmetrySpec::validate() const {
  if (kind == SymmetryKind::kNone) {
    return;
  }
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidInput, "symmetry axis must be unit length");
  }
  if (kind == SymmetryKind::kDiscrete) {
    if (!(angle_deg > 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "symmetry angle must be positive");
    }
    const double order = 360.0 / angle_deg;
    if (std::abs(order - std::round(order)) > 1e-9 || std::round(order) < 2.0) {
      throw Error(ErrorCode::kInvalidInput, "symmetry angle must divide 360 into at least 2 parts");
    }
  }
}

int SymmetrySpec::order() const {
  if (kind != SymmetryKind::kDiscrete) {
    return 1;
  }
  return static_cast<int>(std::lround(360.0 / angle_deg));
}

std::vector<Rotation> SymmetrySpec::elements() const {
  std::vector<Rotation> out;
  const int n = order();
  out.reserve(static_cast<std::size_t>(n));
  out.emplace_back();
  for (int j = 1; j < n; ++j) {
    out.push_back(Rotation::about_axis(axis, deg2rad(angle_deg * j)));
  }
  return out;
}

double sym_aware_angle(const Rotation& pred, const Rotation& gt, const SymmetrySpec& sym) {
  switch (sym.kind) {
    case SymmetryKind::kNone:
      return geodesic_angle(pred, gt);
    case SymmetryKind::kDiscrete: {
      double best = geodesic_angle(pred, gt);
      for (const auto& s : sym.elements()) {
        best = std::min(best, geodesic_angle(pred, gt * s));
      }
      return best;
    }
    case SymmetryKind::kContinuous: {
      const Eigen::Vector3d a = pred.matrix() * sym.axis;
      const Eigen::Vector3d b = gt.matrix() * sym.axis;
      return rad2deg(std::atan2(a.cross(b).norm(), a.dot(b)));
    }
  }
  return geodesic_angle(pred, gt);
}

}  // namespace cano

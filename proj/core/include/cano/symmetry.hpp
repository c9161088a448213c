#pragma once

#include <vector>

#include "cano/rotation.hpp"

namespace cano {

enum class SymmetryKind { kNone, kDiscrete, kContinuous };

/// Per-category rotational symmetry about an axis of the canonical frame.
struct SymmetrySpec {
  SymmetryKind kind = SymmetryKind::kNone;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double angle_deg = 0.0;  // discrete only; 360 / angle_deg is an integer >= 2

  static SymmetrySpec none() { return {}; }
  static SymmetrySpec discrete(const Eigen::Vector3d& axis, double angle_deg);
  static SymmetrySpec continuous(const Eigen::Vector3d& axis);

  /// Throws invalid-input on a non-unit axis or an angle that does not divide 360.
  void validate() const;
  /// Number of symmetry elements for the discrete kind, 1 otherwise.
  int order() const;
  /// Rotations about `axis` by multiples of `angle_deg`, starting with identity.
  std::vector<Rotation> elements() const;
};

/// Pose error in degrees that ignores differences the symmetry makes invisible.
///   none:       geodesic_angle(pred, gt)
///   discrete:   min_j geodesic_angle(pred, gt * S_j)
///   continuous: angle between pred*axis and gt*axis
double sym_aware_angle(const Rotation& pred, const Rotation& gt, const SymmetrySpec& sym);

}  // namespace cano

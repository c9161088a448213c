#pragma once

#include <array>

#include <Eigen/Core>

namespace cano {

/// Proper rotation in 3-space, stored as a unit quaternion with w >= 0.
///
/// Composition and inversion are done on the quaternion directly so that
/// `r.inverse() * r` is exactly the identity (zero vector part) in floating
/// point. Matrix form is produced on demand.
class Rotation {
 public:
  Rotation() = default;

  /// Normalizes (w, x, y, z). Throws invalid-input on a zero or non-finite quaternion.
  static Rotation from_quaternion(double w, double x, double y, double z);
  /// For deserialization: accepts a quaternion whose norm is within 1e-6 of
  /// one (invalid-input otherwise) and keeps already-unit input bit-exact.
  static Rotation from_unit_quaternion(double w, double x, double y, double z);
  /// Throws invalid-input unless `m` is orthonormal with det +1 within 1e-6.
  static Rotation from_matrix(const Eigen::Matrix3d& m);
  static Rotation about_axis(const Eigen::Vector3d& axis, double radians);
  static Rotation about_z(double radians);
  /// Shortest-arc rotation taking unit vector `from` onto unit vector `to`.
  static Rotation between(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

  Eigen::Matrix3d matrix() const;
  /// Quaternion coefficients in (w, x, y, z) order.
  std::array<double, 4> wxyz() const { return {w_, x_, y_, z_}; }

  Rotation inverse() const;
  Rotation operator*(const Rotation& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const;

  /// Rotation angle in radians, in [0, pi].
  double angle() const;

  bool operator==(const Rotation&) const = default;

 private:
  Rotation(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// Angular distance in degrees, in [0, 180].
double geodesic_angle(const Rotation& r1, const Rotation& r2);

double deg2rad(double degrees);
double rad2deg(double radians);

}  // namespace cano

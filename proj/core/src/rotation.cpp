#include "cano/rotation.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "cano/error.hpp"

namespace cano {

namespace {

// Sign-canonical form: w >= 0, and for w == 0 the first nonzero component positive.
void canonicalize_sign(double& w, double& x, double& y, double& z) {
  bool flip = w < 0.0;
  if (w == 0.0) {
    if (x != 0.0) {
      flip = x < 0.0;
    } else if (y != 0.0) {
      flip = y < 0.0;
    } else {
      flip = z < 0.0;
    }
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
}

}  // namespace

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw Error(ErrorCode::kInvalidInput, "quaternion must be finite and nonzero");
  }
  if (n != 1.0) {
    w /= n;
    x /= n;
    y /= n;
    z /= n;
  }
  canonicalize_sign(w, x, y, z);
  return Rotation(w, x, y, z);
}

Rotation Rotation::from_unit_quaternion(double w, double x, double y, double z) {
  const double n2 = w * w + x * x + y * y + z * z;
  if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidInput, "quaternion is not unit-norm");
  }
  if (std::abs(n2 - 1.0) > 1e-14) {
    return from_quaternion(w, x, y, z);
  }
  canonicalize_sign(w, x, y, z);
  return Rotation(w, x, y, z);
}

Rotation Rotation::from_matrix(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "rotation matrix has non-finite entries");
  }
  const double ortho_err = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho_err > 1e-6 || std::abs(det - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidInput, "matrix is not a proper rotation");
  }
  const Eigen::Quaterniond q(m);
  return from_quaternion(q.w(), q.x(), q.y(), q.z());
}

Rotation Rotation::about_axis(const Eigen::Vector3d& axis, double radians) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "rotation axis must be nonzero");
  }
  const double s = std::sin(0.5 * radians) / n;
  return from_quaternion(std::cos(0.5 * radians), axis.x() * s, axis.y() * s, axis.z() * s);
}

Rotation Rotation::about_z(double radians) {
  return from_quaternion(std::cos(0.5 * radians), 0.0, 0.0, std::sin(0.5 * radians));
}

Rotation Rotation::between(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const Eigen::Vector3d a = from.normalized();
  const Eigen::Vector3d b = to.normalized();
  const double c = a.dot(b);
  if (c < -1.0 + 1e-12) {
    // Antiparallel: half-turn about any axis orthogonal to `a`.
    Eigen::Vector3d ortho = a.cross(Eigen::Vector3d::UnitX());
    if (ortho.squaredNorm() < 1e-6) {
      ortho = a.cross(Eigen::Vector3d::UnitY());
    }
    return about_axis(ortho, std::numbers::pi);
  }
  const Eigen::Vector3d v = a.cross(b);
  return from_quaternion(1.0 + c, v.x(), v.y(), v.z());
}

Eigen::Matrix3d Rotation::matrix() const {
  const double xx = x_ * x_, yy = y_ * y_, zz = z_ * z_;
  const double xy = x_ * y_, xz = x_ * z_, yz = y_ * z_;
  const double wx = w_ * x_, wy = w_ * y_, wz = w_ * z_;
  Eigen::Matrix3d m;
  m << 1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy),
       2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx),
       2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy);
  return m;
}

Rotation Rotation::inverse() const {
  double w = w_, x = -x_, y = -y_, z = -z_;
  canonicalize_sign(w, x, y, z);
  return Rotation(w, x, y, z);
}

Rotation Rotation::operator*(const Rotation& r) const {
  // Terms are grouped so that for q^-1 * q each pair cancels exactly.
  double w = w_ * r.w_ - x_ * r.x_ - y_ * r.y_ - z_ * r.z_;
  double x = (w_ * r.x_ + x_ * r.w_) + (y_ * r.z_ - z_ * r.y_);
  double y = (w_ * r.y_ + y_ * r.w_) + (z_ * r.x_ - x_ * r.z_);
  double z = (w_ * r.z_ + z_ * r.w_) + (x_ * r.y_ - y_ * r.x_);
  // Products of unit quaternions drift only at round-off level; renormalize
  // when the drift is measurable so long composition chains stay unit.
  const double n2 = w * w + x * x + y * y + z * z;
  if (std::abs(n2 - 1.0) > 1e-14) {
    const double n = std::sqrt(n2);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
  }
  canonicalize_sign(w, x, y, z);
  return Rotation(w, x, y, z);
}

Eigen::Vector3d Rotation::operator*(const Eigen::Vector3d& v) const {
  return matrix() * v;
}

double Rotation::angle() const {
  const double s = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
  return 2.0 * std::atan2(s, std::abs(w_));
}

double geodesic_angle(const Rotation& r1, const Rotation& r2) {
  return rad2deg((r1.inverse() * r2).angle());
}

double deg2rad(double degrees) { return degrees * std::numbers::pi / 180.0; }
double rad2deg(double radians) { return radians * 180.0 / std::numbers::pi; }

}  // namespace cano

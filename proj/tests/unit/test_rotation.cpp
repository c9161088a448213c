#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "cano/consistency.hpp"
#include "cano/error.hpp"
#include "cano/rotation.hpp"
#include "oracles.hpp"

using namespace cano;
using cano::testing::rodrigues;
using cano::testing::trace_angle_deg;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Rotation, DefaultIsIdentity) {
  const Rotation r;
  EXPECT_TRUE(r.matrix().isApprox(Eigen::Matrix3d::Identity(), 0.0));
  EXPECT_EQ(r.angle(), 0.0);
}

TEST(Rotation, AboutZQuarterTurnMapsXToY) {
  const Eigen::Vector3d v = Rotation::about_z(kPi / 2) * Eigen::Vector3d::UnitX();
  EXPECT_NEAR(v.x(), 0.0, 1e-12);
  EXPECT_NEAR(v.y(), 1.0, 1e-12);
  EXPECT_NEAR(v.z(), 0.0, 1e-12);
}

TEST(Rotation, MatrixMatchesRodrigues) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d axis(g(rng), g(rng), g(rng));
    const double a = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    const Rotation r = Rotation::about_axis(axis, a);
    EXPECT_LT((r.matrix() - rodrigues(axis, a)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rotation, QuaternionSignIsCanonical) {
  const Rotation a = Rotation::from_quaternion(-0.5, 0.5, 0.5, 0.5);
  const Rotation b = Rotation::from_quaternion(0.5, -0.5, -0.5, -0.5);
  EXPECT_EQ(a, b);
  EXPECT_GE(a.wxyz()[0], 0.0);
}

TEST(Rotation, InverseComposesToExactIdentity) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Rotation r = random_rotation(rng);
    const auto q = (r.inverse() * r).wxyz();
    EXPECT_EQ(q[1], 0.0);
    EXPECT_EQ(q[2], 0.0);
    EXPECT_EQ(q[3], 0.0);
  }
}

TEST(Rotation, CompositionMatchesMatrixProduct) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const Rotation a = random_rotation(rng);
    const Rotation b = random_rotation(rng);
    EXPECT_LT(((a * b).matrix() - a.matrix() * b.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rotation, FromMatrixRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Rotation r = random_rotation(rng);
    EXPECT_LT(geodesic_angle(Rotation::from_matrix(r.matrix()), r), 1e-6);
  }
}

TEST(Rotation, FromMatrixRejectsReflection) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(2, 2) = -1.0;
  EXPECT_THROW(Rotation::from_matrix(m), Error);
  EXPECT_THROW(Rotation::from_matrix(2.0 * Eigen::Matrix3d::Identity()), Error);
}

TEST(Rotation, RejectsZeroQuaternion) {
  EXPECT_THROW(Rotation::from_quaternion(0, 0, 0, 0), Error);
  EXPECT_THROW(Rotation::from_quaternion(NAN, 0, 0, 1), Error);
}

TEST(Rotation, FromUnitQuaternionKeepsBitsAndChecksNorm) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_rotation(rng).wxyz();
    EXPECT_EQ(Rotation::from_unit_quaternion(q[0], q[1], q[2], q[3]).wxyz(), q);
  }
  EXPECT_THROW(Rotation::from_unit_quaternion(1.0 + 1e-5, 0, 0, 0), Error);
  EXPECT_NO_THROW(Rotation::from_unit_quaternion(1.0 + 1e-7, 0, 0, 0));
}

TEST(Rotation, BetweenTakesFromOntoTo) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d a = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const Eigen::Vector3d b = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    EXPECT_LT((Rotation::between(a, b) * a - b).norm(), 1e-12);
  }
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  EXPECT_LT((Rotation::between(z, -z) * z + z).norm(), 1e-12);
  EXPECT_LT((Rotation::between(z, z) * z - z).norm(), 1e-15);
}

TEST(GeodesicAngle, Examples) {
  const Rotation r = Rotation::about_axis(Eigen::Vector3d(1, 2, 3), 0.7);
  EXPECT_EQ(geodesic_angle(r, r), 0.0);
  EXPECT_NEAR(geodesic_angle(Rotation(), Rotation::about_z(kPi)), 180.0, 1e-12);
}

TEST(GeodesicAngle, MatchesQuaternionDotAndTraceFormulas) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 200; ++i) {
    const Rotation a = random_rotation(rng);
    const Rotation b = random_rotation(rng);
    const auto qa = a.wxyz();
    const auto qb = b.wxyz();
    const double dot = std::abs(qa[0] * qb[0] + qa[1] * qb[1] + qa[2] * qb[2] + qa[3] * qb[3]);
    const double expected = 2.0 * std::acos(std::min(1.0, dot)) * 180.0 / kPi;
    EXPECT_NEAR(geodesic_angle(a, b), expected, 1e-6);
    EXPECT_NEAR(geodesic_angle(a, b), trace_angle_deg(a.matrix(), b.matrix()), 1e-5);
  }
}

TEST(GeodesicAngle, MetricProperties) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rotation a = random_rotation(rng);
    const Rotation b = random_rotation(rng);
    const Rotation c = random_rotation(rng);
    const double ab = geodesic_angle(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 180.0);
    EXPECT_DOUBLE_EQ(ab, geodesic_angle(b, a));
    EXPECT_LE(ab, geodesic_angle(a, c) + geodesic_angle(c, b) + 1e-9);
  }
}

TEST(GeodesicAngle, OrthonormalityOfRandomRotations) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix3d m = random_rotation(rng).matrix();
    EXPECT_LT((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
  }
}

TEST(Angles, DegreeRadianConversion) {
  EXPECT_DOUBLE_EQ(deg2rad(180.0), kPi);
  EXPECT_DOUBLE_EQ(rad2deg(kPi / 2), 90.0);
}

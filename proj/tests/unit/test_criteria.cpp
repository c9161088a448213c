#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "cano/consistency.hpp"
#include "cano/criteria.hpp"
#include "cano/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace cano;
using cano::testing::make_template;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStep = kPi / 180.0;

// Smallest angular difference in degrees between two angles given in radians.
double angle_diff_deg(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return rad2deg(std::min(d, 2.0 * kPi - d));
}

EnergyProfile analytic_profile(const std::function<double(double)>& f) {
  EnergyProfile p;
  for (int i = 0; i < 360; ++i) {
    p.thetas.push_back(i * 2.0 * kPi / 360.0);
    p.e_g.push_back(f(p.thetas.back()));
  }
  return p;
}

// Unit-sigma wrapped normal density, summed over images directly.
double wrapped_normal(double d) {
  double s = 0.0;
  for (int k = -4; k <= 4; ++k) {
    const double x = d + 2.0 * kPi * k;
    s += std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
  }
  return s;
}

// Cyclic grid distance in cells.
std::size_t cell_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

const CategoryTemplate& chair_template() {
  static const CategoryTemplate t = make_template("chair", cano::testing::chair_mesh());
  return t;
}

const CategoryTemplate& camera_template() {
  static const CategoryTemplate t = make_template("camera", cano::testing::camera_mesh());
  return t;
}

// Three rings of 360 points at 1-degree spacing: exactly invariant under the search grid.
LabeledCloud ring_cylinder() {
  LabeledCloud c;
  for (const double z : {-0.5, 0.0, 0.5}) {
    for (int i = 0; i < 360; ++i) {
      const double a = i * 2.0 * kPi / 360.0;
      c.points.emplace_back(0.6 * std::cos(a), 0.6 * std::sin(a), z);
    }
  }
  return normalize_to_unit_sphere(c).first;
}

}  // namespace

TEST(CriterionConfig, Validation) {
  CriterionConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.grid_size(), 360u);
  cfg.grid_step = deg2rad(7.0);
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.gaussian_sigma = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(HorizontalGeometric, IdentityGivesZero) {
  const auto g = horizontal_geometric(chair_template().cloud, chair_template());
  EXPECT_LT(angle_diff_deg(g.theta, 0.0), 0.05);
  EXPECT_EQ(geodesic_angle(g.r_invg, g.r_g * Rotation::about_z(kPi)) < 1e-9, true);
  EXPECT_FALSE(g.continuous_symmetry);
  const auto& e = g.profile.e_g;
  EXPECT_EQ(std::min_element(e.begin(), e.end()) - e.begin(), 0);
}

TEST(HorizontalGeometric, Recovers37Degrees) {
  const auto& t = chair_template();
  const Rotation applied = Rotation::about_z(deg2rad(37.0));
  const auto exact = horizontal_geometric(rotate(t.cloud, applied), t);
  EXPECT_LT(angle_diff_deg(exact.theta, deg2rad(-37.0)), 0.1);
  // Independently resampled instance of the same shape.
  const auto inst = cano::testing::make_posed_instance("c", t, 0, applied, 4096, 99);
  const auto resampled = horizontal_geometric(inst.object.cloud, t);
  EXPECT_LT(angle_diff_deg(resampled.theta, deg2rad(-37.0)), 1.5);
}

TEST(HorizontalGeometric, RingCylinderIsContinuouslySymmetric) {
  CategoryTemplate t;
  t.category = "cylinder";
  t.cloud = ring_cylinder();
  CriterionConfig cfg;
  cfg.max_search_points = 4096;
  const auto g = horizontal_geometric(rotate(t.cloud, Rotation::about_z(deg2rad(23.0))), t, cfg);
  EXPECT_TRUE(g.continuous_symmetry);
  EXPECT_EQ(g.theta, 0.0);
}

TEST(HorizontalGeometric, EnergyNonNegativeAndProfileShapes) {
  const auto& t = chair_template();
  const auto g = horizontal_geometric(rotate(t.cloud, Rotation::about_z(1.0)), t);
  ASSERT_EQ(g.profile.thetas.size(), 360u);
  ASSERT_EQ(g.profile.e_g.size(), 360u);
  for (std::size_t i = 0; i < 360; ++i) {
    EXPECT_GE(g.profile.e_g[i], 0.0);
    EXPECT_NEAR(g.profile.thetas[i], i * kStep, 1e-12);
  }
}

TEST(HorizontalGeometric, ProfileShiftsCyclicallyWithObjectYaw) {
  const auto& t = chair_template();
  const LabeledCloud obj = rotate(t.cloud, Rotation::about_z(0.3));
  const auto base = horizontal_geometric(obj, t).profile.e_g;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> shift(1, 359);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = shift(rng);
    // Yawing the object by k cells shifts the profile by k cells.
    const auto shifted = horizontal_geometric(rotate(obj, Rotation::about_z(k * kStep)), t).profile.e_g;
    for (int i = 0; i < 360; ++i) {
      EXPECT_NEAR(shifted[i], base[(i + k) % 360], 1e-9) << "shift " << k << " cell " << i;
    }
  }
}

TEST(HorizontalGeometric, CommonYawLeavesProfileUnchanged) {
  const auto& t = chair_template();
  const LabeledCloud obj = rotate(t.cloud, Rotation::about_z(0.8));
  const auto base = horizontal_geometric(obj, t).profile.e_g;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (int trial = 0; trial < 3; ++trial) {
    const Rotation r = Rotation::about_z(u(rng));
    CategoryTemplate rt = t;
    rt.cloud = rotate(t.cloud, r);
    const auto e = horizontal_geometric(rotate(obj, r), rt).profile.e_g;
    for (int i = 0; i < 360; ++i) EXPECT_NEAR(e[i], base[i], 1e-9);
  }
}

TEST(Extrema, SingleCosineMinimum) {
  const auto p = analytic_profile([](double t) { return 1.0 - std::cos(t); });
  EXPECT_EQ(extrema_of_energy(p), (std::vector<std::size_t>{0}));
}

TEST(Extrema, DoubleCosineMinima) {
  const auto p = analytic_profile([](double t) { return 1.0 - std::cos(2.0 * t); });
  EXPECT_EQ(extrema_of_energy(p), (std::vector<std::size_t>{0, 180}));
}

TEST(Extrema, FlatProfileGivesZero) {
  const auto p = analytic_profile([](double) { return 0.25; });
  EXPECT_EQ(extrema_of_energy(p), (std::vector<std::size_t>{0}));
}

TEST(Extrema, PlateauContributesMidpoint) {
  auto p = analytic_profile([](double t) { return 1.0 - std::cos(t - kPi); });
  for (std::size_t i = 170; i <= 190; ++i) p.e_g[i] = 0.0;
  EXPECT_EQ(extrema_of_energy(p), (std::vector<std::size_t>{180}));
}

TEST(Extrema, ChairMinimaMatchUnsmoothedScan) {
  // Near-symmetric chair: mirrored about the yz plane apart from the back.
  const auto& t = chair_template();
  const auto g = horizontal_geometric(rotate(t.cloud, Rotation::about_z(deg2rad(140.0))), t);
  const auto& e = g.profile.e_g;
  const std::size_t n = e.size();
  std::vector<std::size_t> raw;
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i] <= e[(i + n - 1) % n] && e[i] <= e[(i + 1) % n]) raw.push_back(i);
  }
  const auto omega = extrema_of_energy(g.profile);
  ASSERT_FALSE(omega.empty());
  for (const std::size_t w : omega) {
    EXPECT_TRUE(std::any_of(raw.begin(), raw.end(), [&](std::size_t r) { return cell_distance(r, w, n) <= 1; }))
        << "omega " << w << " has no raw minimum nearby";
  }
  const std::size_t global = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
  EXPECT_TRUE(std::any_of(omega.begin(), omega.end(), [&](std::size_t w) { return cell_distance(global, w, n) <= 1; }));
}

TEST(JointObjective, PositiveEverywhere) {
  const CriterionConfig cfg;
  EXPECT_GT(joint_objective(1e6, 0.0, {kPi}, cfg), 0.0);
  EXPECT_GE(joint_objective(1e6, 0.0, {kPi}, cfg), cfg.semantic_weight_floor);
  EXPECT_GT(joint_objective(0.0, kPi, {0.0}, cfg), cfg.semantic_weight_floor);
}

TEST(JointObjective, WrappedNormalDensity) {
  const CriterionConfig cfg;
  for (const double theta : {0.0, 0.4, kPi, 5.9}) {
    for (const double omega : {0.1, 3.0, 6.2}) {
      EXPECT_NEAR(joint_objective(0.3, theta, {omega}, cfg), std::exp(-0.3) * wrapped_normal(theta - omega), 1e-15);
    }
  }
  // Symmetric about the antipode: a far extremum exerts no pull on theta = 0.
  EXPECT_NEAR(joint_objective(0.0, 0.01, {kPi}, cfg), joint_objective(0.0, -0.01, {kPi}, cfg), 1e-15);
}

TEST(JointObjective, ConstantSemanticEnergyReducesToGaussianMass) {
  const CriterionConfig cfg;
  for (const int k : {1, 2, 3}) {
    auto p = analytic_profile([k](double t) { return 1.0 - std::cos(k * t); });
    p.extrema = extrema_of_energy(p);
    p.e_s.assign(p.thetas.size(), 0.7);
    const std::size_t best = argmax_joint_objective(p, cfg);
    // Oracle: maximum over the grid of the plain wrapped-normal mixture.
    auto mass = [&](std::size_t i) {
      double s = 0.0;
      for (const std::size_t w : p.extrema) s += wrapped_normal(p.thetas[i] - p.thetas[w]);
      return s;
    };
    double oracle = 0.0;
    for (std::size_t i = 0; i < p.thetas.size(); ++i) oracle = std::max(oracle, mass(i));
    EXPECT_NEAR(mass(best), oracle, 1e-12) << "k=" << k;
    EXPECT_TRUE(std::any_of(p.extrema.begin(), p.extrema.end(),
                            [&](std::size_t w) { return cell_distance(w, best, 360) <= 1; }));
  }
}

TEST(HorizontalSemantic, IdentityGivesZero) {
  const auto s = horizontal_semantic(chair_template().cloud, chair_template());
  EXPECT_LT(angle_diff_deg(s.theta, 0.0), 0.05);
  EXPECT_EQ(s.parts_used, chair_template().cloud.part_names.size());
  EXPECT_GT(s.objective, 0.0);
}

TEST(HorizontalSemantic, CameraLensBreaksHalfTurnTie) {
  const auto& t = camera_template();
  const LabeledCloud obj = rotate(t.cloud, Rotation::about_z(kPi));  // lens now faces -x
  const auto s = horizontal_semantic(obj, t);
  EXPECT_LT(angle_diff_deg(s.theta, kPi), 0.5);

  // Direct evaluation of the objective at both half-turn candidates.
  const auto parts = shared_parts(obj, t.cloud);
  std::vector<double> omegas;
  for (const std::size_t w : s.profile.extrema) omegas.push_back(s.profile.thetas[w]);
  const CriterionConfig cfg;
  const double j0 = joint_objective(semantic_alignment_cost(parts, Rotation()), 0.0, omegas, cfg);
  const double jpi = joint_objective(semantic_alignment_cost(parts, Rotation::about_z(kPi)), kPi, omegas, cfg);
  EXPECT_GT(jpi, j0);
}

TEST(HorizontalSemantic, NoSharedPartsThrows) {
  LabeledCloud obj = chair_template().cloud;
  for (auto& n : obj.part_names) n = "x_" + n;
  try {
    horizontal_semantic(obj, chair_template());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSemanticUnavailable);
  }
  LabeledCloud unlabeled = chair_template().cloud;
  unlabeled.labels.clear();
  unlabeled.part_names.clear();
  EXPECT_THROW(horizontal_semantic(unlabeled, chair_template()), Error);
}

TEST(SharedParts, DropsPartsMissingOnEitherSide) {
  LabeledCloud obj = chair_template().cloud;
  // Relabel the first part as something the template lacks.
  obj.part_names.push_back("cushion");
  const int cushion = static_cast<int>(obj.part_names.size()) - 1;
  for (auto& l : obj.labels) {
    if (l == 0) l = cushion;
  }
  const auto parts = shared_parts(obj, chair_template().cloud);
  EXPECT_EQ(parts.size(), chair_template().cloud.part_names.size() - 1);
  for (const auto& p : parts) EXPECT_NE(p.name, chair_template().cloud.part_names[0]);
}

TEST(PcaAlign, IdentityIsExactFixedPoint) {
  const auto& t = chair_template();
  const auto a = pca_align(t.cloud, t);
  EXPECT_LT(geodesic_angle(a.r_pca, Rotation()), 1e-6);
  EXPECT_EQ(a.costs[a.chosen], *std::min_element(a.costs.begin(), a.costs.end()));
  EXPECT_LT(a.costs[a.chosen], 1e-12);
  EXPECT_FALSE(a.ambiguous);
}

TEST(PcaAlign, RecoversRandomRotationWithLabels) {
  std::mt19937_64 rng(3);
  for (const auto& nm : cano::testing::asymmetric_categories()) {
    const auto t = make_template(nm.category, nm.mesh);
    for (int i = 0; i < 4; ++i) {
      const Rotation r = random_rotation(rng);
      const auto a = pca_align(rotate(t.cloud, r), t);
      EXPECT_LE(geodesic_angle(a.r_pca, r.inverse()), 2.0) << nm.category;
    }
  }
}

TEST(PcaAlign, CandidatesAreProperRotationsAndCostsMatchOracle) {
  std::mt19937_64 rng(4);
  const auto& t = chair_template();
  const LabeledCloud obj = rotate(t.cloud, random_rotation(rng));
  const auto a = pca_align(obj, t);
  const auto parts = shared_parts(obj, t.cloud);
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Matrix3d m = a.candidates[i].matrix();
    EXPECT_LT((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-9);
    EXPECT_EQ(a.costs[i], cano::testing::brute_semantic_cost(parts, a.candidates[i]));
  }
}

TEST(PcaAlign, MirroredLabelLayoutPicksMatchingPolarity) {
  // Centrally symmetric lattice: the frame's sign is fixed by the tie rule, so
  // only the labels distinguish the four polarity candidates.
  LabeledCloud base;
  base.points = cano::testing::lattice_box(0.9, 0.5, 0.25, 19, 11, 6);
  base.part_names = {"front", "left", "rest"};
  for (const auto& p : base.points) base.labels.push_back(p.x() > 0.45 ? 0 : (p.y() > 0.25 ? 1 : 2));
  CategoryTemplate t;
  t.category = "slab";
  t.cloud = normalize_to_unit_sphere(base).first;
  for (int flip = 0; flip < 4; ++flip) {
    const double sx = (flip & 1) ? -1.0 : 1.0;
    const double sy = (flip & 2) ? -1.0 : 1.0;
    const Rotation truth = Rotation::from_matrix(Eigen::Vector3d(sx, sy, sx * sy).asDiagonal().toDenseMatrix());
    const auto a = pca_align(rotate(t.cloud, truth), t);
    EXPECT_LT(geodesic_angle(a.r_pca, truth.inverse()), 1e-6) << "flip " << flip;
    EXPECT_EQ(a.costs[a.chosen], *std::min_element(a.costs.begin(), a.costs.end()));
  }
}

TEST(PcaAlign, DegenerateFrameThrows) {
  LabeledCloud sphere;
  const int n = 2000;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    sphere.points.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
    sphere.labels.push_back(z > 0 ? 0 : 1);
  }
  sphere.part_names = {"top", "bottom"};
  CategoryTemplate t;
  t.cloud = sphere;
  try {
    pca_align(sphere, chair_template());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPcaDegenerate);
  }
}

TEST(PcaAlign, AmbiguousCostsPickFirstCandidate) {
  // Unlabeled-equivalent: one part covering everything on a centrally symmetric box.
  LabeledCloud c;
  c.points = cano::testing::lattice_box(0.9, 0.5, 0.25, 10, 6, 4);
  c.labels.assign(c.points.size(), 0);
  c.part_names = {"all"};
  CategoryTemplate t;
  t.cloud = normalize_to_unit_sphere(c).first;
  const auto a = pca_align(t.cloud, t);
  EXPECT_TRUE(a.ambiguous);
  EXPECT_EQ(a.chosen, 0u);
}

TEST(GoldenSection, FindsParabolaMinimum) {
  const auto [x, fx] = golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3) + 2.0; }, 0.0, 1.0, 1e-9);
  EXPECT_NEAR(x, 0.3, 1e-7);
  EXPECT_NEAR(fx, 2.0, 1e-15);
}

TEST(WrapAngle, IntoHalfOpenRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi / 2), 1.5 * kPi);
  EXPECT_EQ(wrap_angle(2 * kPi), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(5 * kPi), kPi);
}

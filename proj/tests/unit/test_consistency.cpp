#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cano/consistency.hpp"
#include "cano/criteria.hpp"
#include "cano/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace cano;

namespace {

LabeledCloud small_cloud() {
  std::mt19937_64 rng(9);
  LabeledCloud c;
  c.points = cano::testing::random_points(64, rng);
  return c;
}

// Replays the trial generator so it knows each perturbation R_j.
Canonicalizer exact_inverse(std::uint64_t seed, const Rotation& bias = Rotation()) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng, bias](const LabeledCloud&) { return bias * random_rotation(*rng).inverse(); };
}

}  // namespace

TEST(Consistency, ExactInverseOracleIsExactlyZero) {
  for (const std::uint64_t seed : {1ULL, 17ULL, 12345ULL}) {
    ConsistencyOptions opts;
    opts.seed = seed;
    opts.n_trials = 12;
    const auto ic = instance_consistency(exact_inverse(seed), small_cloud(), opts);
    EXPECT_EQ(ic.value, 0.0);
    EXPECT_EQ(ic.trials, 12u);
    const auto gec = gt_equivariance_consistency(exact_inverse(seed), small_cloud(), Rotation(), opts);
    EXPECT_EQ(gec.value, 0.0);
  }
}

TEST(Consistency, IdentityCanonicalizerMatchesHaarOracle) {
  ConsistencyOptions opts;
  opts.n_trials = 64;
  opts.seed = 3;
  const auto ic = instance_consistency([](const LabeledCloud&) { return Rotation(); }, small_cloud(), opts);
  const double oracle = cano::testing::haar_mean_pairwise_angle_mc(200000, 77);
  EXPECT_NEAR(oracle, std::numbers::pi / 2 + 2 / std::numbers::pi, 0.01);
  EXPECT_NEAR(ic.value, oracle, 0.05);
}

TEST(Consistency, ConstantYawBiasGivesThatGec) {
  ConsistencyOptions opts;
  opts.seed = 4;
  const auto gec = gt_equivariance_consistency(exact_inverse(4, Rotation::about_z(0.1)), small_cloud(), Rotation(), opts);
  EXPECT_NEAR(gec.value, 0.1, 1e-9);
  const auto ic = instance_consistency(exact_inverse(4, Rotation::about_z(0.1)), small_cloud(), opts);
  EXPECT_NEAR(ic.value, 0.0, 1e-9);
}

TEST(Consistency, PairwiseTriangleInequality) {
  ConsistencyOptions opts;
  opts.seed = 5;
  opts.n_trials = 20;
  // Canonicalizer with independent per-trial error.
  auto replay = std::make_shared<std::mt19937_64>(5);
  auto noise = std::make_shared<std::mt19937_64>(99);
  const Canonicalizer noisy = [replay, noise](const LabeledCloud&) {
    std::normal_distribution<double> g(0.0, 0.3);
    const Rotation err = Rotation::about_axis(Eigen::Vector3d(g(*noise), g(*noise), 1.0), g(*noise));
    return err * random_rotation(*replay).inverse();
  };
  const auto gec = gt_equivariance_consistency(noisy, small_cloud(), Rotation(), opts);
  ASSERT_EQ(gec.per_trial.size(), 20u);
  for (std::size_t j = 0; j < 20; ++j) {
    for (std::size_t l = j + 1; l < 20; ++l) {
      const double d = canonical_distance(gec.orientations[j], gec.orientations[l], opts.symmetry);
      EXPECT_LE(d, gec.per_trial[j] + gec.per_trial[l] + 1e-12);
    }
  }
}

TEST(Consistency, FailuresAreCounted) {
  ConsistencyOptions opts;
  opts.n_trials = 10;
  auto calls = std::make_shared<int>(0);
  const Canonicalizer flaky = [calls](const LabeledCloud&) {
    if ((*calls)++ % 2 == 1) throw Error(ErrorCode::kDegenerateGeometry, "flaky");
    return Rotation();
  };
  const auto ic = instance_consistency(flaky, small_cloud(), opts);
  EXPECT_EQ(ic.failures, 5u);
  EXPECT_EQ(ic.trials, 5u);
  EXPECT_EQ(ic.perturbations.size(), 10u);
}

TEST(Consistency, NeedsTwoTrials) {
  ConsistencyOptions opts;
  opts.n_trials = 1;
  EXPECT_THROW(instance_consistency([](const LabeledCloud&) { return Rotation(); }, small_cloud(), opts), Error);
}

TEST(Consistency, YawModePerturbsAboutVertical) {
  ConsistencyOptions opts;
  opts.mode = PerturbationMode::kYawOnly;
  const auto ic = instance_consistency([](const LabeledCloud&) { return Rotation(); }, small_cloud(), opts);
  for (const auto& r : ic.perturbations) {
    EXPECT_LT((r * Eigen::Vector3d::UnitZ() - Eigen::Vector3d::UnitZ()).norm(), 1e-12);
  }
}

TEST(Consistency, SymmetryAwareDistance) {
  const SymmetrySpec sym = SymmetrySpec::discrete(Eigen::Vector3d::UnitZ(), 90.0);
  // Canonicalizations differing by a symmetry element are equivalent.
  const Rotation a = Rotation::about_axis(Eigen::Vector3d(1, 2, 3), 0.4);
  EXPECT_NEAR(canonical_distance(a, Rotation::about_z(std::numbers::pi / 2) * a, sym), 0.0, 1e-9);
  EXPECT_GT(canonical_distance(a, Rotation::about_z(std::numbers::pi / 2) * a, SymmetrySpec::none()), 1.5);
}

TEST(Consistency, GeometricCanonicalizerOnUprightShapeIsConsistent) {
  const auto t = cano::testing::make_template("chair", cano::testing::chair_mesh());
  const Canonicalizer hg = [&t](const LabeledCloud& c) { return horizontal_geometric(c, t).r_g; };
  ConsistencyOptions opts;
  opts.mode = PerturbationMode::kYawOnly;
  opts.n_trials = 8;
  const auto ic = instance_consistency(hg, t.cloud, opts);
  EXPECT_LE(ic.value, 0.004);
  EXPECT_EQ(ic.failures, 0u);
}

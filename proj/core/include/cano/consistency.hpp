#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "cano/cloud.hpp"
#include "cano/symmetry.hpp"

namespace cano {

/// Maps an observed (rotated) instance to the rotation that canonicalizes it.
/// May throw; failures are counted rather than propagated.
using Canonicalizer = std::function<Rotation(const LabeledCloud&)>;

enum class PerturbationMode { kFullSO3, kYawOnly };

/// Haar-uniform rotation (normalized Gaussian quaternion).
Rotation random_rotation(std::mt19937_64& rng);

struct ConsistencyOptions {
  std::size_t n_trials = 16;
  std::uint64_t seed = 1;
  PerturbationMode mode = PerturbationMode::kFullSO3;
  SymmetrySpec symmetry;
};

/// IC and GEC in radians.
///
/// Trial j rotates the instance by a random R_j and canonicalizes it to C_j;
/// the canonical orientation is O_j = C_j * R_j. IC is the mean over pairs of
/// the symmetry-aware distance between O_j and O_l, GEC the mean distance of
/// O_j to the ground-truth canonical rotation. Distances compare the poses
/// O_j^-1 so that symmetry elements act in the canonical frame.
struct ConsistencyResult {
  double value = 0.0;
  std::size_t trials = 0;    // successful trials
  std::size_t failures = 0;  // canonicalizer threw
  std::vector<Rotation> perturbations;  // R_j, including failed trials
  std::vector<Rotation> orientations;   // O_j of successful trials
  std::vector<double> per_trial;        // GEC only: distance of each O_j to ground truth
};

/// Throws invalid-input when n_trials < 2.
ConsistencyResult instance_consistency(const Canonicalizer& canonicalizer, const LabeledCloud& instance,
                                       const ConsistencyOptions& opts = {});

ConsistencyResult gt_equivariance_consistency(const Canonicalizer& canonicalizer, const LabeledCloud& instance,
                                              const Rotation& gt_canonical, const ConsistencyOptions& opts = {});

/// Symmetry-aware distance in radians between two canonicalizing rotations.
double canonical_distance(const Rotation& a, const Rotation& b, const SymmetrySpec& sym);

}  // namespace cano

#include "cano/consistency.hpp"

#include <cmath>
#include <numbers>

#include "cano/error.hpp"

namespace cano {

namespace {

Rotation random_yaw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return Rotation::about_z(u(rng));
}

ConsistencyResult run_trials(const Canonicalizer& canonicalizer, const LabeledCloud& instance,
                             const ConsistencyOptions& opts) {
  if (opts.n_trials < 2) {
    throw Error(ErrorCode::kInvalidInput, "consistency needs at least two trials");
  }
  std::mt19937_64 rng(opts.seed);
  ConsistencyResult out;
  for (std::size_t j = 0; j < opts.n_trials; ++j) {
    const Rotation r = opts.mode == PerturbationMode::kFullSO3 ? random_rotation(rng) : random_yaw(rng);
    out.perturbations.push_back(r);
    try {
      const Rotation c = canonicalizer(rotate(instance, r));
      out.orientations.push_back(c * r);
    } catch (const std::exception&) {
      ++out.failures;
    }
  }
  out.trials = out.orientations.size();
  return out;
}

}  // namespace

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  while (true) {
    const double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
    const double norm = std::sqrt(w * w + x * x + y * y + z * z);
    if (norm > 1e-12) {
      return Rotation::from_quaternion(w / norm, x / norm, y / norm, z / norm);
    }
  }
}

double canonical_distance(const Rotation& a, const Rotation& b, const SymmetrySpec& sym) {
  return deg2rad(sym_aware_angle(a.inverse(), b.inverse(), sym));
}

ConsistencyResult instance_consistency(const Canonicalizer& canonicalizer, const LabeledCloud& instance,
                                       const ConsistencyOptions& opts) {
  ConsistencyResult out = run_trials(canonicalizer, instance, opts);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t j = 0; j < out.orientations.size(); ++j) {
    for (std::size_t l = j + 1; l < out.orientations.size(); ++l) {
      sum += canonical_distance(out.orientations[j], out.orientations[l], opts.symmetry);
      ++pairs;
    }
  }
  out.value = pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
  return out;
}

ConsistencyResult gt_equivariance_consistency(const Canonicalizer& canonicalizer, const LabeledCloud& instance,
                                              const Rotation& gt_canonical, const ConsistencyOptions& opts) {
  ConsistencyResult out = run_trials(canonicalizer, instance, opts);
  double sum = 0.0;
  for (const auto& o : out.orientations) {
    out.per_trial.push_back(canonical_distance(o, gt_canonical, opts.symmetry));
    sum += out.per_trial.back();
  }
  out.value = out.orientations.empty() ? 0.0 : sum / static_cast<double>(out.orientations.size());
  return out;
}

}  // namespace cano

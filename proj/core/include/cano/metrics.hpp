#pragma once

#include <span>
#include <string>
#include <vector>

#include "cano/rotation.hpp"
#include "cano/symmetry.hpp"

namespace cano {

/// Rotations here are poses: they map the canonical frame onto the observed
/// object, so symmetry elements compose on the right.
struct ErrorSample {
  std::string object_id;
  Rotation predicted;
  Rotation ground_truth;
  SymmetrySpec symmetry;

  double error_deg() const { return sym_aware_angle(predicted, ground_truth, symmetry); }
};

std::vector<double> errors_deg(std::span<const ErrorSample> samples);

/// Fraction of errors <= threshold. Throws invalid-input when empty.
double accuracy_at(std::span<const double> errors_deg, double threshold_deg);
double accuracy_at(std::span<const ErrorSample> samples, double threshold_deg);

double mean_abs_error(std::span<const double> errors_deg);
double mean_abs_error(std::span<const ErrorSample> samples);

/// Linear-interpolation (type 7) quantile, q in [0, 1].
double quantile(std::span<const double> values, double q);

/// Q3 - Q1 with type-7 quantiles.
double iqr(std::span<const double> errors_deg);
double iqr(std::span<const ErrorSample> samples);

}  // namespace cano

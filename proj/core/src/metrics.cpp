#include "cano/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cano/error.hpp"

namespace cano {

namespace {

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " needs at least one sample");
  }
}

}  // namespace

std::vector<double> errors_deg(std::span<const ErrorSample> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back(s.error_deg());
  }
  return out;
}

double accuracy_at(std::span<const double> errors, double threshold_deg) {
  require_nonempty(errors.size(), "accuracy_at");
  const auto hits = std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= threshold_deg; });
  return static_cast<double>(hits) / static_cast<double>(errors.size());
}

double accuracy_at(std::span<const ErrorSample> samples, double threshold_deg) {
  return accuracy_at(errors_deg(samples), threshold_deg);
}

double mean_abs_error(std::span<const double> errors) {
  require_nonempty(errors.size(), "mean_abs_error");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());  // order-independent rounding
  double sum = 0.0;
  for (const double e : sorted) {
    sum += std::abs(e);
  }
  return sum / static_cast<double>(sorted.size());
}

double mean_abs_error(std::span<const ErrorSample> samples) { return mean_abs_error(errors_deg(samples)); }

double quantile(std::span<const double> values, double q) {
  require_nonempty(values.size(), "quantile");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "quantile level must lie in [0, 1]");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double iqr(std::span<const double> errors) {
  require_nonempty(errors.size(), "iqr");
  return quantile(errors, 0.75) - quantile(errors, 0.25);
}

double iqr(std::span<const ErrorSample> samples) { return iqr(errors_deg(samples)); }

}  // namespace cano

#include "cano/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include <Eigen/Geometry>

#include "cano/chamfer.hpp"
#include "cano/error.hpp"
#include "cano/kdtree.hpp"

namespace cano {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Precomputed nearest-neighbor indices for evaluating yaw energies.
//
// CD(P, R_z(t) Q) is split as mean_p min_q |R_z(-t) p - q|^2 + mean_q min_p |R_z(t) q - p|^2
// so both trees are built once and only the query points rotate. Nearest
// neighbors of the previous evaluation seed each query.
class YawEnergy {
 public:
  YawEnergy(std::vector<Point3> tmpl, std::vector<Point3> obj)
      : tmpl_(std::move(tmpl)), obj_(std::move(obj)), tmpl_tree_(tmpl_), obj_tree_(obj_),
        hint_t_(tmpl_.size(), 0), hint_o_(obj_.size(), 0) {}

  double operator()(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double sum_t = 0.0;
    for (std::size_t i = 0; i < tmpl_.size(); ++i) {
      const Point3& p = tmpl_[i];
      // R_z(-theta) p
      const Point3 q(c * p.x() + s * p.y(), -s * p.x() + c * p.y(), p.z());
      const auto hit = obj_tree_.nearest(q, hint_t_[i]);
      hint_t_[i] = hit.index;
      sum_t += hit.squared_distance;
    }
    double sum_o = 0.0;
    for (std::size_t i = 0; i < obj_.size(); ++i) {
      const Point3& p = obj_[i];
      const Point3 q(c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z());
      const auto hit = tmpl_tree_.nearest(q, hint_o_[i]);
      hint_o_[i] = hit.index;
      sum_o += hit.squared_distance;
    }
    return sum_t / static_cast<double>(tmpl_.size()) + sum_o / static_cast<double>(obj_.size());
  }

 private:
  std::vector<Point3> tmpl_;
  std::vector<Point3> obj_;
  KdTree tmpl_tree_;
  KdTree obj_tree_;
  std::vector<std::size_t> hint_t_;
  std::vector<std::size_t> hint_o_;
};

class SemanticYawEnergy {
 public:
  explicit SemanticYawEnergy(const std::vector<PartPair>& parts) {
    for (const auto& p : parts) {
      terms_.push_back(std::make_unique<YawEnergy>(p.template_points, p.object_points));
    }
  }

  double operator()(double theta) {
    double sum = 0.0;
    for (auto& t : terms_) {
      sum += (*t)(theta);
    }
    return sum / static_cast<double>(terms_.size());
  }

 private:
  std::vector<std::unique_ptr<YawEnergy>> terms_;
};

EnergyProfile geometric_profile(YawEnergy& energy, const CriterionConfig& cfg) {
  const std::size_t n = cfg.grid_size();
  EnergyProfile profile;
  profile.thetas.resize(n);
  profile.e_g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    profile.thetas[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    profile.e_g[i] = energy(profile.thetas[i]);
  }
  profile.extrema = extrema_of_energy(profile);
  return profile;
}

// Refines a grid optimum of `f` (to be minimized) within its two neighboring cells.
std::pair<double, double> refine_minimum(const std::function<double(double)>& f, double theta,
                                         double value, const CriterionConfig& cfg) {
  if (!cfg.refine) {
    return {theta, value};
  }
  const auto [x, fx] = golden_section_minimize(f, theta - cfg.grid_step, theta + cfg.grid_step,
                                               cfg.refine_tolerance);
  if (fx < value) {
    return {wrap_angle(x), fx};
  }
  return {theta, value};
}

std::vector<Point3> search_points(const LabeledCloud& cloud, const CriterionConfig& cfg) {
  return subsample(cloud, cfg.max_search_points).points;
}

std::vector<double> omegas_of(const EnergyProfile& p) {
  std::vector<double> out;
  out.reserve(p.extrema.size());
  for (const std::size_t i : p.extrema) {
    out.push_back(p.thetas[i]);
  }
  return out;
}

}  // namespace

void CriterionConfig::validate() const {
  if (!(grid_step > 0.0) || !(gaussian_sigma > 0.0) || !(refine_tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "grid_step, gaussian_sigma and refine_tolerance must be positive");
  }
  const double n = kTwoPi / grid_step;
  if (std::abs(n - std::round(n)) > 1e-6 || std::round(n) < 3.0) {
    throw Error(ErrorCode::kInvalidInput, "grid_step must divide 2*pi into an integer count >= 3");
  }
  if (!(semantic_weight_floor > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "semantic_weight_floor must be positive");
  }
}

std::size_t CriterionConfig::grid_size() const {
  return static_cast<std::size_t>(std::lround(kTwoPi / grid_step));
}

double wrap_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  if (r >= kTwoPi) {
    r = 0.0;
  }
  return r;
}

std::pair<double, double> golden_section_minimize(const std::function<double(double)>& f, double lo,
                                                  double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

std::vector<PartPair> shared_parts(const LabeledCloud& object, const LabeledCloud& tmpl) {
  if (!object.has_labels() || !tmpl.has_labels()) {
    throw Error(ErrorCode::kSemanticUnavailable, "object or template carries no part labels");
  }
  std::map<std::string, int> tmpl_index;
  for (int k = 0; k < static_cast<int>(tmpl.part_names.size()); ++k) {
    tmpl_index.emplace(tmpl.part_names[k], k);
  }
  std::vector<PartPair> out;
  for (int k = 0; k < static_cast<int>(object.part_names.size()); ++k) {
    const auto it = tmpl_index.find(object.part_names[k]);
    if (it == tmpl_index.end()) {
      continue;
    }
    PartPair pair{object.part_names[k], tmpl.part_points(it->second), object.part_points(k)};
    if (!pair.template_points.empty() && !pair.object_points.empty()) {
      out.push_back(std::move(pair));
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kSemanticUnavailable, "object and template share no populated part");
  }
  return out;
}

double semantic_alignment_cost(const std::vector<PartPair>& parts, const Rotation& r) {
  double sum = 0.0;
  for (const auto& p : parts) {
    sum += chamfer_distance(p.template_points, rotate_points(p.object_points, r));
  }
  return sum / static_cast<double>(parts.size());
}

GeometricAlignment horizontal_geometric(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                        const CriterionConfig& cfg) {
  cfg.validate();
  if (object.empty() || tmpl.cloud.empty()) {
    throw Error(ErrorCode::kInvalidInput, "horizontal search needs non-empty clouds");
  }
  YawEnergy energy(search_points(tmpl.cloud, cfg), search_points(object, cfg));
  GeometricAlignment out;
  out.profile = geometric_profile(energy, cfg);

  const auto& e = out.profile.e_g;
  const auto [mn, mx] = std::minmax_element(e.begin(), e.end());
  if (*mx - *mn < cfg.flat_tolerance) {
    out.continuous_symmetry = true;
    out.theta = 0.0;
    out.energy = e.front();
  } else {
    const auto i = static_cast<std::size_t>(mn - e.begin());
    std::tie(out.theta, out.energy) =
        refine_minimum([&](double t) { return energy(t); }, out.profile.thetas[i], *mn, cfg);
  }
  out.r_g = Rotation::about_z(out.theta);
  out.r_invg = Rotation::about_z(out.theta + std::numbers::pi);
  return out;
}

std::vector<std::size_t> extrema_of_energy(const EnergyProfile& profile) {
  const auto& e = profile.e_g;
  const std::size_t n = e.size();
  if (n == 0) {
    return {};
  }
  auto at = [n](const std::vector<double>& v, std::ptrdiff_t i) -> double {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return v[static_cast<std::size_t>(((i % m) + m) % m)];
  };
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    s[i] = (at(e, ii - 1) + e[i] + at(e, ii + 1)) / 3.0;
  }
  // Start scanning at a value change so that runs never wrap past the start.
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] != s[(i + n - 1) % n]) {
      start = i;
      break;
    }
  }
  if (start == n) {
    return {0};
  }
  std::vector<std::size_t> minima;
  std::size_t k = 0;
  while (k < n) {
    const std::size_t a = (start + k) % n;
    std::size_t len = 1;
    while (len < n && s[(a + len) % n] == s[a]) {
      ++len;
    }
    const double left = s[(a + n - 1) % n];
    const double right = s[(a + len) % n];
    if (left > s[a] && right > s[a]) {
      minima.push_back((a + (len - 1) / 2) % n);
    }
    k += len;
  }
  // Snap to a local minimum of the unsmoothed energy.
  for (auto& idx : minima) {
    while (true) {
      const std::size_t l = (idx + n - 1) % n;
      const std::size_t r = (idx + 1) % n;
      if (e[l] < e[idx] && e[l] <= e[r]) {
        idx = l;
      } else if (e[r] < e[idx]) {
        idx = r;
      } else {
        break;
      }
    }
  }
  std::sort(minima.begin(), minima.end());
  minima.erase(std::unique(minima.begin(), minima.end()), minima.end());
  if (minima.empty()) {
    minima.push_back(static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin()));
  }
  return minima;
}

double joint_objective(double e_s, double theta, const std::vector<double>& omegas,
                       const CriterionConfig& cfg) {
  // Wrapped normal density: the Gaussian summed over its 2*pi images. Unlike a
  // Gaussian of the shortest angular distance it is smooth at the antipode of
  // each extremum, so a far extremum does not bias the maximizer.
  const double sigma = cfg.gaussian_sigma;
  const double norm = 1.0 / (sigma * std::sqrt(kTwoPi));
  const int images = static_cast<int>(std::ceil(6.0 * sigma / kTwoPi)) + 1;
  double mass = 0.0;
  for (const double w : omegas) {
    double d = wrap_angle(theta) - wrap_angle(w);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d < -std::numbers::pi) d += kTwoPi;
    for (int k = -images; k <= images; ++k) {
      const double dk = d + k * kTwoPi;
      mass += norm * std::exp(-0.5 * dk * dk / (sigma * sigma));
    }
  }
  return std::max(std::exp(-e_s) * mass, cfg.semantic_weight_floor);
}

std::size_t argmax_joint_objective(const EnergyProfile& profile, const CriterionConfig& cfg) {
  if (profile.e_s.size() != profile.thetas.size() || profile.thetas.empty()) {
    throw Error(ErrorCode::kInvalidInput, "profile lacks semantic energies");
  }
  const std::vector<double> omegas = omegas_of(profile);
  std::size_t best = 0;
  double best_j = -1.0;
  for (std::size_t i = 0; i < profile.thetas.size(); ++i) {
    const double j = joint_objective(profile.e_s[i], profile.thetas[i], omegas, cfg);
    if (j > best_j) {
      best_j = j;
      best = i;
    }
  }
  return best;
}

SemanticAlignment horizontal_semantic(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                      const CriterionConfig& cfg, const EnergyProfile& geometric) {
  cfg.validate();
  const std::vector<PartPair> parts =
      shared_parts(subsample(object, cfg.max_search_points), subsample(tmpl.cloud, cfg.max_search_points));
  SemanticYawEnergy energy(parts);

  SemanticAlignment out;
  out.parts_used = parts.size();
  out.profile = geometric;
  if (out.profile.extrema.empty()) {
    out.profile.extrema = extrema_of_energy(out.profile);
  }
  const std::size_t n = out.profile.thetas.size();
  out.profile.e_s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.profile.e_s[i] = energy(out.profile.thetas[i]);
  }
  const std::vector<double> omegas = omegas_of(out.profile);
  const std::size_t best = argmax_joint_objective(out.profile, cfg);
  out.theta = out.profile.thetas[best];
  out.semantic_energy = out.profile.e_s[best];
  out.objective = joint_objective(out.semantic_energy, out.theta, omegas, cfg);

  if (cfg.refine) {
    const auto neg_j = [&](double t) { return -joint_objective(energy(t), t, omegas, cfg); };
    const auto [t, v] = refine_minimum(neg_j, out.theta, -out.objective, cfg);
    if (t != out.theta) {
      out.theta = t;
      out.objective = -v;
      out.semantic_energy = energy(t);
    }
  }
  out.r_s = Rotation::about_z(out.theta);
  return out;
}

SemanticAlignment horizontal_semantic(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                      const CriterionConfig& cfg) {
  cfg.validate();
  // Fail before the geometric sweep when semantics are missing.
  shared_parts(object, tmpl.cloud);
  YawEnergy energy(search_points(tmpl.cloud, cfg), search_points(object, cfg));
  return horizontal_semantic(object, tmpl, cfg, geometric_profile(energy, cfg));
}

std::array<Rotation, 4> pca_polarity_candidates(const PcaFrame& object, const PcaFrame& tmpl) {
  Eigen::Matrix3d t;
  t.col(0) = tmpl.v1;
  t.col(1) = tmpl.v2;
  t.col(2) = tmpl.v1.cross(tmpl.v2);
  constexpr std::array<std::array<double, 2>, 4> kSigns{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  std::array<Rotation, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Vector3d a = kSigns[i][0] * object.v1;
    const Eigen::Vector3d b = kSigns[i][1] * object.v2;
    Eigen::Matrix3d o;
    o.col(0) = a;
    o.col(1) = b;
    o.col(2) = a.cross(b);
    out[i] = Rotation::from_matrix(t * o.transpose());
  }
  return out;
}

namespace {

PcaAlignment pca_align_with(const LabeledCloud& object, const CategoryTemplate& tmpl, double gap_tolerance,
                            const std::vector<PartPair>& parts) {
  const PcaFrame fo = principal_axes(object, gap_tolerance);
  const PcaFrame ft = principal_axes(tmpl.cloud, gap_tolerance);
  if (fo.degenerate || ft.degenerate) {
    throw Error(ErrorCode::kPcaDegenerate, fo.degenerate ? "object principal axes are ambiguous"
                                                         : "template principal axes are ambiguous");
  }
  PcaAlignment out;
  out.candidates = pca_polarity_candidates(fo, ft);
  for (std::size_t i = 0; i < 4; ++i) {
    out.costs[i] = semantic_alignment_cost(parts, out.candidates[i]);
  }
  const auto [mn, mx] = std::minmax_element(out.costs.begin(), out.costs.end());
  out.ambiguous = *mx - *mn <= 1e-9;
  out.chosen = out.ambiguous ? 0 : static_cast<std::size_t>(mn - out.costs.begin());
  out.r_pca = out.candidates[out.chosen];
  return out;
}

}  // namespace

PcaAlignment pca_align(const LabeledCloud& object, const CategoryTemplate& tmpl, double gap_tolerance) {
  const PcaFrame fo = principal_axes(object, gap_tolerance);
  const PcaFrame ft = principal_axes(tmpl.cloud, gap_tolerance);
  if (fo.degenerate || ft.degenerate) {
    throw Error(ErrorCode::kPcaDegenerate, fo.degenerate ? "object principal axes are ambiguous"
                                                         : "template principal axes are ambiguous");
  }
  return pca_align_with(object, tmpl, gap_tolerance, shared_parts(object, tmpl.cloud));
}

PcaAlignment pca_align_geometric(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                 double gap_tolerance) {
  std::vector<PartPair> whole{{"*", tmpl.cloud.points, object.points}};
  return pca_align_with(object, tmpl, gap_tolerance, whole);
}

}  // namespace cano

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cano/cloud.hpp"
#include "cano/pca.hpp"
#include "cano/template.hpp"

namespace cano {

struct CriterionConfig {
  double grid_step = 3.14159265358979323846 / 180.0;  // radians; must divide 2*pi
  bool refine = true;
  double refine_tolerance = 0.05 * 3.14159265358979323846 / 180.0;  // final bracket width, radians
  double gaussian_sigma = 1.0;                                       // radians
  double semantic_weight_floor = 1e-12;
  /// Clouds larger than this are stride-subsampled before the yaw search.
  std::size_t max_search_points = 512;
  /// Energy ranges below this count as rotationally symmetric (flat).
  double flat_tolerance = 1e-9;

  /// Throws invalid-input when the grid does not tile [0, 2*pi) or sigma <= 0.
  void validate() const;
  std::size_t grid_size() const;
};

/// Energies sampled on the yaw grid thetas[i] = i * 2*pi / n.
struct EnergyProfile {
  std::vector<double> thetas;
  std::vector<double> e_g;
  std::vector<double> e_s;            // empty unless a semantic solve filled it
  std::vector<std::size_t> extrema;   // cyclic local minima of e_g
};

/// Yaw about +z minimizing the full-cloud Chamfer energy, and its half-turn partner.
struct GeometricAlignment {
  Rotation r_g;
  Rotation r_invg;
  double theta = 0.0;   // radians, [0, 2*pi)
  double energy = 0.0;  // e_g at theta
  bool continuous_symmetry = false;
  EnergyProfile profile;
};

struct SemanticAlignment {
  Rotation r_s;
  double theta = 0.0;
  double objective = 0.0;       // joint objective J at theta
  double semantic_energy = 0.0; // e_s at theta
  std::size_t parts_used = 0;
  EnergyProfile profile;
};

struct PcaAlignment {
  Rotation r_pca;
  std::array<Rotation, 4> candidates;  // sign patterns (+,+), (+,-), (-,+), (-,-)
  std::array<double, 4> costs{};
  std::size_t chosen = 0;
  bool ambiguous = false;  // all four costs within 1e-9
};

/// Point sets of parts present (by name) in both clouds, template side first.
struct PartPair {
  std::string name;
  std::vector<Point3> template_points;
  std::vector<Point3> object_points;
};

/// Throws semantic-unavailable when the clouds share no populated part.
std::vector<PartPair> shared_parts(const LabeledCloud& object, const LabeledCloud& tmpl);

/// (1/m) sum_k CD(S_k^t, R S_k^o)
double semantic_alignment_cost(const std::vector<PartPair>& parts, const Rotation& r);

GeometricAlignment horizontal_geometric(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                        const CriterionConfig& cfg = {});

/// Cyclic local minima of e_g after 3-tap mean smoothing, each snapped to a
/// local minimum of the raw energy. Plateaus contribute their midpoint; a
/// flat profile yields {0}.
std::vector<std::size_t> extrema_of_energy(const EnergyProfile& profile);

/// Joint objective exp(-e_s) * sum_k N(theta | omega_k, sigma), floored, with N the
/// wrapped normal density on the circle.
double joint_objective(double e_s, double theta, const std::vector<double>& omegas,
                       const CriterionConfig& cfg);

/// Grid index maximizing the joint objective of a profile with e_s filled in.
std::size_t argmax_joint_objective(const EnergyProfile& profile, const CriterionConfig& cfg);

/// Throws semantic-unavailable when no part is shared.
SemanticAlignment horizontal_semantic(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                      const CriterionConfig& cfg = {});
/// Reuses an already computed geometric profile of the same object/template pair.
SemanticAlignment horizontal_semantic(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                      const CriterionConfig& cfg, const EnergyProfile& geometric);

/// The four polarity-resolved rotations taking the object's principal frame
/// onto the template's.
std::array<Rotation, 4> pca_polarity_candidates(const PcaFrame& object, const PcaFrame& tmpl);

/// Throws pca-degenerate or semantic-unavailable per its preconditions.
PcaAlignment pca_align(const LabeledCloud& object, const CategoryTemplate& tmpl,
                       double gap_tolerance = kDefaultPcaGapTolerance);

/// Polarity resolved with the full-cloud Chamfer distance instead of parts,
/// for objects without shared semantics.
PcaAlignment pca_align_geometric(const LabeledCloud& object, const CategoryTemplate& tmpl,
                                 double gap_tolerance = kDefaultPcaGapTolerance);

/// Golden-section minimization of `f` on [lo, hi] down to a bracket of width `tol`.
std::pair<double, double> golden_section_minimize(const std::function<double(double)>& f, double lo,
                                                  double hi, double tol);

double wrap_angle(double radians);  // into [0, 2*pi)

}  // namespace cano

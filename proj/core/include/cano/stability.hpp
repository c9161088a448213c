#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "cano/convex_hull.hpp"
#include "cano/mesh.hpp"

namespace cano {

/// One way of resting the object on a convex-hull facet.
struct SupportCandidate {
  Eigen::Vector3d facet_normal;      // outward unit normal in the input frame
  Rotation rotation;                 // takes facet_normal to (0, 0, -1)
  std::vector<Point2> support_polygon;  // ground-plane footprint after `rotation`
  double support_area = 0.0;
  double com_margin = 0.0;   // signed distance of the projected CoM to the polygon boundary
  double com_height = 0.0;   // CoM height above the ground plane after `rotation`
  bool stable = false;       // com_margin > margin_epsilon
};

struct StabilityOptions {
  double merge_tolerance_deg = 2.0;
  double margin_epsilon = 1e-4;
};

/// Hull facets of the mesh vertices (near-coplanar facets merged), each with
/// its uprighting rotation and equilibrium verdict, sorted by descending
/// support area. Throws degenerate-geometry for fewer than 4 non-coplanar vertices.
std::vector<SupportCandidate> support_candidates(const Mesh& mesh, const StabilityOptions& opts = {});

/// Same, for a bare point set whose center of mass is supplied by the caller.
std::vector<SupportCandidate> support_candidates(const std::vector<Point3>& points, const Point3& com,
                                                 const StabilityOptions& opts = {});

/// Scores support candidates; higher is better. Must return one score per candidate.
class UprightScorer {
 public:
  virtual ~UprightScorer() = default;
  virtual std::vector<double> score(const Mesh& mesh, std::span<const SupportCandidate> candidates) = 0;
};

/// support_area - lambda * com_height
class HeuristicUprightScorer final : public UprightScorer {
 public:
  explicit HeuristicUprightScorer(double lambda = 1.0) : lambda_(lambda) {}
  std::vector<double> score(const Mesh& mesh, std::span<const SupportCandidate> candidates) override;

 private:
  double lambda_;
};

/// Delegates scoring to an external program.
///
/// The program is run as `<command> <preview_dir> <manifest>`. `preview_dir`
/// holds one PLY per candidate (`candidate_<id>.ply`, the mesh under that
/// candidate's rotation); `manifest` lists `<id> <file>` per line. The program
/// must print one `<id> <score>` line per candidate on standard output.
class ExternalCommandScorer final : public UprightScorer {
 public:
  explicit ExternalCommandScorer(std::string command, std::filesystem::path work_root = {});
  std::vector<double> score(const Mesh& mesh, std::span<const SupportCandidate> candidates) override;

 private:
  std::string command_;
  std::filesystem::path work_root_;
  std::mutex mu_;
};

struct UprightSelection {
  Rotation rotation;
  std::size_t index = 0;  // into the candidate list
  double score = 0.0;
};

/// Highest-scoring stable candidate; ties keep the earlier candidate.
/// Throws no-stable-pose when no candidate is stable.
UprightSelection select_upright(std::span<const SupportCandidate> candidates, UprightScorer& scorer,
                                const Mesh& mesh);

}  // namespace cano

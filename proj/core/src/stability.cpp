#include "cano/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cano/error.hpp"

namespace cano {

std::vector<SupportCandidate> support_candidates(const std::vector<Point3>& points, const Point3& com,
                                                 const StabilityOptions& opts) {
  const ConvexHull hull = convex_hull(points);

  std::vector<std::size_t> order(hull.facets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return hull.facets[a].area > hull.facets[b].area;
  });

  // Greedy clustering of facets around the largest facet of each cluster.
  const double cos_tol = std::cos(deg2rad(opts.merge_tolerance_deg));
  std::vector<std::vector<std::size_t>> clusters;
  for (const std::size_t f : order) {
    if (!(hull.facets[f].area > 0.0)) {
      continue;
    }
    bool placed = false;
    for (auto& c : clusters) {
      if (hull.facets[c.front()].normal.dot(hull.facets[f].normal) > cos_tol) {
        c.push_back(f);
        placed = true;
        break;
      }
    }
    if (!placed) {
      clusters.push_back({f});
    }
  }

  const Eigen::Vector3d down(0.0, 0.0, -1.0);
  std::vector<SupportCandidate> out;
  out.reserve(clusters.size());
  for (const auto& cluster : clusters) {
    const HullFacet& rep = hull.facets[cluster.front()];
    SupportCandidate cand;
    cand.facet_normal = rep.normal;
    cand.rotation = Rotation::between(rep.normal, down);
    const Eigen::Matrix3d r = cand.rotation.matrix();

    std::vector<int> verts;
    for (const std::size_t f : cluster) {
      verts.insert(verts.end(), hull.facets[f].v.begin(), hull.facets[f].v.end());
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::vector<Point2> footprint;
    footprint.reserve(verts.size());
    for (const int v : verts) {
      const Point3 q = r * hull.points[v];
      footprint.emplace_back(q.x(), q.y());
    }
    cand.support_polygon = convex_hull_2d(std::move(footprint));
    cand.support_area = std::abs(polygon_area(cand.support_polygon));

    const Point3 c = r * com;
    cand.com_margin = signed_boundary_distance(cand.support_polygon, Point2(c.x(), c.y()));
    cand.com_height = rep.offset - rep.normal.dot(com);
    cand.stable = cand.com_margin > opts.margin_epsilon;
    out.push_back(std::move(cand));
  }
  std::stable_sort(out.begin(), out.end(), [](const SupportCandidate& a, const SupportCandidate& b) {
    return a.support_area > b.support_area;
  });
  return out;
}

std::vector<SupportCandidate> support_candidates(const Mesh& mesh, const StabilityOptions& opts) {
  mesh.validate();
  const CenterOfMass com = center_of_mass(mesh);
  return support_candidates(mesh.vertices, com.point, opts);
}

std::vector<double> HeuristicUprightScorer::score(const Mesh& /*mesh*/,
                                                  std::span<const SupportCandidate> candidates) {
  std::vector<double> s;
  s.reserve(candidates.size());
  for (const auto& c : candidates) {
    s.push_back(c.support_area - lambda_ * c.com_height);
  }
  return s;
}

UprightSelection select_upright(std::span<const SupportCandidate> candidates, UprightScorer& scorer,
                                const Mesh& mesh) {
  const bool any_stable =
      std::any_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.stable; });
  if (!any_stable) {
    throw Error(ErrorCode::kNoStablePose, "no support facet keeps the center of mass inside its polygon");
  }
  const std::vector<double> scores = scorer.score(mesh, candidates);
  if (scores.size() != candidates.size()) {
    throw Error(ErrorCode::kExternalScorer, "scorer returned " + std::to_string(scores.size()) +
                                                " scores for " + std::to_string(candidates.size()) +
                                                " candidates");
  }
  UprightSelection best;
  bool found = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].stable) {
      continue;
    }
    if (!found || scores[i] > best.score) {
      best = {candidates[i].rotation, i, scores[i]};
      found = true;
    }
  }
  return best;
}

}  // namespace cano

#pragma once

#include <array>
#include <vector>

#include "cano/cloud.hpp"

namespace cano {

struct HullFacet {
  std::array<int, 3> v;     // indices into ConvexHull::points, counter-clockwise seen from outside
  Eigen::Vector3d normal;   // outward unit normal
  double offset;            // normal.dot(x) == offset on the facet plane
  double area;
};

struct ConvexHull {
  std::vector<Point3> points;  // deduplicated input points
  std::vector<HullFacet> facets;
};

/// Quickhull. Throws degenerate-geometry when fewer than 4 non-coplanar points exist.
ConvexHull convex_hull(const std::vector<Point3>& points);

using Point2 = Eigen::Vector2d;

/// Counter-clockwise 2D convex hull without collinear points (monotone chain).
std::vector<Point2> convex_hull_2d(std::vector<Point2> points);
double polygon_area(const std::vector<Point2>& polygon);
/// Distance from `p` to the boundary of a counter-clockwise convex polygon,
/// positive inside and negative outside.
double signed_boundary_distance(const std::vector<Point2>& polygon, const Point2& p);

}  // namespace cano

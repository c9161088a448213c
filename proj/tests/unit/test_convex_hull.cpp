#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "cano/convex_hull.hpp"
#include "cano/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace cano;

TEST(ConvexHull, CubeHasTwelveTriangles) {
  const ConvexHull h = convex_hull(cano::testing::box({0, 0, 0}, {0.5, 0.5, 0.5}).vertices);
  EXPECT_EQ(h.facets.size(), 12u);
  double area = 0.0;
  for (const auto& f : h.facets) area += f.area;
  EXPECT_NEAR(area, 6.0, 1e-12);
}

TEST(ConvexHull, ContainsAllInputPoints) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = cano::testing::random_points(500, rng);
    const ConvexHull h = convex_hull(pts);
    for (const auto& f : h.facets) {
      EXPECT_NEAR(f.normal.norm(), 1.0, 1e-12);
      for (const auto& p : pts) EXPECT_LE(f.normal.dot(p) - f.offset, 1e-9);
      // Counter-clockwise from outside: the winding normal agrees with the stored one.
      const Eigen::Vector3d n = (h.points[f.v[1]] - h.points[f.v[0]]).cross(h.points[f.v[2]] - h.points[f.v[0]]);
      EXPECT_GT(n.dot(f.normal), 0.0);
    }
  }
}

TEST(ConvexHull, CoplanarInputThrows) {
  const std::vector<Point3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}};
  try {
    convex_hull(flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGeometry);
  }
}

TEST(ConvexHull2d, SquareWithInteriorAndCollinearPoints) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0.5, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.3, 0.7}};
  const auto hull = convex_hull_2d(pts);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_NEAR(polygon_area(hull), 1.0, 1e-15);
}

TEST(ConvexHull2d, SignedBoundaryDistanceAgreesWithPointInPolygon) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point2> pts;
  for (int i = 0; i < 40; ++i) pts.emplace_back(u(rng), u(rng));
  const auto hull = convex_hull_2d(pts);
  for (int i = 0; i < 2000; ++i) {
    const Point2 p(1.5 * u(rng), 1.5 * u(rng));
    const double d = signed_boundary_distance(hull, p);
    if (std::abs(d) > 1e-12) EXPECT_EQ(d > 0, cano::testing::point_in_polygon(hull, p));
  }
  EXPECT_NEAR(signed_boundary_distance(convex_hull_2d({{0, 0}, {2, 0}, {2, 2}, {0, 2}}), {1, 1}), 1.0, 1e-15);
  EXPECT_NEAR(signed_boundary_distance(convex_hull_2d({{0, 0}, {2, 0}, {2, 2}, {0, 2}}), {3, 1}), -1.0, 1e-15);
}

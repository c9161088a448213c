#include "cano/chamfer.hpp"

#include "cano/error.hpp"

namespace cano {

double directed_chamfer(const KdTree& target, std::span<const Point3> queries) {
  double sum = 0.0;
  for (const auto& q : queries) {
    sum += target.nearest(q).squared_distance;
  }
  return sum / static_cast<double>(queries.size());
}

double chamfer_distance(std::span<const Point3> a, std::span<const Point3> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kInvalidInput, "chamfer distance needs two non-empty point sets");
  }
  const KdTree tree_a(a);
  const KdTree tree_b(b);
  return directed_chamfer(tree_b, a) + directed_chamfer(tree_a, b);
}

}  // namespace cano

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cano/cloud.hpp"

namespace cano {

/// Exact nearest-neighbor index over a fixed 3D point set.
///
/// Queries return the same squared distance an exhaustive scan would produce
/// bit-for-bit: distances are always evaluated as dx*dx + dy*dy + dz*dz on the
/// original coordinates, and subtrees are pruned only when the splitting-plane
/// bound strictly exceeds the best distance found so far.
class KdTree {
 public:
  struct Hit {
    double squared_distance;
    std::size_t index;  // into the point set given at construction
  };

  explicit KdTree(std::span<const Point3> points);

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

  /// Nearest neighbor of `q`. Precondition: non-empty tree.
  Hit nearest(const Point3& q) const;
  /// Same as `nearest`, seeding the search bound with point `hint` (an index
  /// into the original set). The result does not depend on the hint.
  Hit nearest(const Point3& q, std::size_t hint) const;

 private:
  struct Node {
    double x, y, z;
  };

  void build(std::size_t lo, std::size_t hi);
  void search(std::size_t lo, std::size_t hi, const Node& q, double& best, std::size_t& best_i) const;

  std::vector<Node> pts_;            // tree order
  std::vector<std::uint32_t> orig_;  // tree slot -> original index
  std::vector<std::uint32_t> slot_;  // original index -> tree slot
  std::vector<std::uint8_t> axis_;   // split axis for the node whose median sits at this slot
};

/// Squared Euclidean distance with the fixed evaluation order used everywhere
/// nearest-neighbor results must agree exactly.
inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace cano

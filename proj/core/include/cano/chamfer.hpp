#pragma once

#include <span>

#include "cano/cloud.hpp"
#include "cano/kdtree.hpp"

namespace cano {

/// Mean over `queries` of the squared distance to the nearest point of `target`.
double directed_chamfer(const KdTree& target, std::span<const Point3> queries);

/// Symmetric squared Chamfer distance:
///   mean_{a} min_{b} |a-b|^2 + mean_{b} min_{a} |a-b|^2
/// Throws invalid-input when either set is empty.
double chamfer_distance(std::span<const Point3> a, std::span<const Point3> b);

}  // namespace cano

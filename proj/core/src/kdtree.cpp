#include "cano/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cano/error.hpp"

namespace cano {

namespace {

constexpr std::size_t kLeafSize = 8;

inline double coord(const auto& n, int axis) {
  return axis == 0 ? n.x : (axis == 1 ? n.y : n.z);
}

}  // namespace

KdTree::KdTree(std::span<const Point3> points) {
  if (points.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidInput, "point set too large for KdTree");
  }
  pts_.reserve(points.size());
  for (const auto& p : points) {
    pts_.push_back({p.x(), p.y(), p.z()});
  }
  orig_.resize(points.size());
  std::iota(orig_.begin(), orig_.end(), 0u);
  axis_.assign(points.size(), 0);
  build(0, pts_.size());
  slot_.resize(points.size());
  for (std::size_t s = 0; s < orig_.size(); ++s) {
    slot_[orig_[s]] = static_cast<std::uint32_t>(s);
  }
}

void KdTree::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) {
    return;
  }
  double mn[3] = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                  std::numeric_limits<double>::max()};
  double mx[3] = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
                  std::numeric_limits<double>::lowest()};
  for (std::size_t i = lo; i < hi; ++i) {
    for (int a = 0; a < 3; ++a) {
      mn[a] = std::min(mn[a], coord(pts_[i], a));
      mx[a] = std::max(mx[a], coord(pts_[i], a));
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (mx[a] - mn[a] > mx[axis] - mn[axis]) {
      axis = a;
    }
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  // Sort a permutation so points and original indices move together.
  std::vector<std::size_t> perm(hi - lo);
  std::iota(perm.begin(), perm.end(), lo);
  std::nth_element(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(mid - lo), perm.end(),
                   [&](std::size_t a, std::size_t b) {
                     const double ca = coord(pts_[a], axis);
                     const double cb = coord(pts_[b], axis);
                     return ca < cb || (ca == cb && orig_[a] < orig_[b]);
                   });
  std::vector<Node> tmp_pts(hi - lo);
  std::vector<std::uint32_t> tmp_orig(hi - lo);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    tmp_pts[k] = pts_[perm[k]];
    tmp_orig[k] = orig_[perm[k]];
  }
  std::copy(tmp_pts.begin(), tmp_pts.end(), pts_.begin() + static_cast<std::ptrdiff_t>(lo));
  std::copy(tmp_orig.begin(), tmp_orig.end(), orig_.begin() + static_cast<std::ptrdiff_t>(lo));
  axis_[mid] = static_cast<std::uint8_t>(axis);
  build(lo, mid);
  build(mid + 1, hi);
}

void KdTree::search(std::size_t lo, std::size_t hi, const Node& q, double& best,
                    std::size_t& best_i) const {
  if (hi - lo <= kLeafSize) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double dx = q.x - pts_[i].x;
      const double dy = q.y - pts_[i].y;
      const double dz = q.z - pts_[i].z;
      const double d = dx * dx + dy * dy + dz * dz;
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const Node& p = pts_[mid];
  {
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double dz = q.z - p.z;
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < best) {
      best = d;
      best_i = mid;
    }
  }
  const int axis = axis_[mid];
  const double diff = coord(q, axis) - coord(p, axis);
  if (diff < 0.0) {
    search(lo, mid, q, best, best_i);
    if (diff * diff < best) {
      search(mid + 1, hi, q, best, best_i);
    }
  } else {
    search(mid + 1, hi, q, best, best_i);
    if (diff * diff < best) {
      search(lo, mid, q, best, best_i);
    }
  }
}

KdTree::Hit KdTree::nearest(const Point3& q) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  search(0, pts_.size(), Node{q.x(), q.y(), q.z()}, best, best_i);
  return {best, orig_[best_i]};
}

KdTree::Hit KdTree::nearest(const Point3& q, std::size_t hint) const {
  const Node qn{q.x(), q.y(), q.z()};
  std::size_t best_i = slot_[hint];
  const Node& h = pts_[best_i];
  const double dx = qn.x - h.x;
  const double dy = qn.y - h.y;
  const double dz = qn.z - h.z;
  double best = dx * dx + dy * dy + dz * dz;
  search(0, pts_.size(), qn, best, best_i);
  return {best, orig_[best_i]};
}

}  // namespace cano

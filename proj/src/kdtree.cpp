// SPDX-License-Identifier: Apache-2.0
#include "svf/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace svf {

namespace {
constexpr std::size_t kLeafSize = 8;
}

KdTree::KdTree(int dim, std::span<const double> coords) : dim_(dim), coords_(coords) {
  order_.resize(coords.size() / dim);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!order_.empty()) build(0, order_.size());
}

int KdTree::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= kLeafSize) return id;

  // Split along the axis of largest extent.
  int axis = 0;
  double best_extent = -1;
  for (int a = 0; a < dim_; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = begin; k < end; ++k) {
      const double v = coords_[order_[k] * dim_ + a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_extent) {
      best_extent = hi - lo;
      axis = a;
    }
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t x, std::size_t y) {
                     const double vx = coords_[x * dim_ + axis];
                     const double vy = coords_[y * dim_ + axis];
                     return vx < vy || (vx == vy && x < y);
                   });
  const double split = coords_[order_[mid] * dim_ + axis];
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

double KdTree::dist2(std::size_t point, std::span<const double> q) const {
  double s = 0;
  const double* p = coords_.data() + point * dim_;
  for (int a = 0; a < dim_; ++a) {
    const double d = p[a] - q[a];
    s += d * d;
  }
  return s;
}

KdTree::Hit KdTree::nearest(std::span<const double> q) const {
  Hit best{0, std::numeric_limits<double>::infinity()};
  nearest_rec(0, q, best);
  return best;
}

void KdTree::nearest_rec(int id, std::span<const double> q, Hit& best) const {
  const Node& node = nodes_[id];
  if (node.axis < 0) {
    for (std::size_t k = node.begin; k < node.end; ++k) {
      const double d2 = dist2(order_[k], q);
      if (d2 < best.dist2 || (d2 == best.dist2 && order_[k] < best.index)) best = {order_[k], d2};
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const int first = diff < 0 ? node.left : node.right;
  const int second = diff < 0 ? node.right : node.left;
  nearest_rec(first, q, best);
  if (diff * diff <= best.dist2) nearest_rec(second, q, best);
}

std::vector<std::size_t> KdTree::radius(std::span<const double> q, double r) const {
  std::vector<std::size_t> out;
  if (!order_.empty()) radius_rec(0, q, r * r, out);
  std::sort(out.begin(), out.end());
  return out;
}

void KdTree::radius_rec(int id, std::span<const double> q, double r2,
                        std::vector<std::size_t>& out) const {
  const Node& node = nodes_[id];
  if (node.axis < 0) {
    for (std::size_t k = node.begin; k < node.end; ++k)
      if (dist2(order_[k], q) <= r2) out.push_back(order_[k]);
    return;
  }
  const double diff = q[node.axis] - node.split;
  if (diff <= 0 || diff * diff <= r2) radius_rec(node.left, q, r2, out);
  if (diff >= 0 || diff * diff <= r2) radius_rec(node.right, q, r2, out);
}

}  // namespace svf

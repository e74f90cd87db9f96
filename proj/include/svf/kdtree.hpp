// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace svf {

// Static k-d tree over points stored contiguously with a runtime dimension.
// The coordinate buffer must outlive the tree.
class KdTree {
 public:
  KdTree() = default;
  KdTree(int dim, std::span<const double> coords);

  struct Hit {
    std::size_t index = 0;
    double dist2 = 0;
  };

  bool empty() const { return order_.empty(); }
  std::size_t size() const { return order_.size(); }
  int dim() const { return dim_; }

  // Requires a non-empty tree.
  Hit nearest(std::span<const double> q) const;
  // Indices of all points with squared distance <= r^2, sorted by index.
  std::vector<std::size_t> radius(std::span<const double> q, double r) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int axis = -1;  // -1 marks a leaf
    double split = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::size_t begin, std::size_t end);
  double dist2(std::size_t point, std::span<const double> q) const;
  void nearest_rec(int node, std::span<const double> q, Hit& best) const;
  void radius_rec(int node, std::span<const double> q, double r2,
                  std::vector<std::size_t>& out) const;

  int dim_ = 0;
  std::span<const double> coords_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace svf

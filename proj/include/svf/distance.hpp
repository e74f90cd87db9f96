// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svf/geom.hpp"
#include "svf/kdtree.hpp"

namespace svf {

struct MLSConfig {
  int m = 3;                 // patch total degree is m - 1
  double rho = 0.125;        // weight support radius
  int max_plane_iterations = 10;
  double plane_tolerance = 1e-10;
  double pivot_floor = 1e-12;
  int max_support_growth = 2;  // rho *= 1.5 while neighbors are too few

  // rho = factor * h.
  static MLSConfig for_spacing(double h, int m = 3, double factor = 4.0);
};

// Wendland C2 bump (1 - r)^4 (4 r + 1) on [0, 1), zero beyond.
double wendland(double r);

// Number of monomials of total degree <= degree in n variables.
int polynomial_basis_size(int n, int degree);

// A point cloud with a spatial index. Owns its coordinates.
class IndexedCloud {
 public:
  explicit IndexedCloud(PointCloud cloud);
  IndexedCloud(const IndexedCloud&) = delete;
  IndexedCloud& operator=(const IndexedCloud&) = delete;

  const PointCloud& cloud() const { return cloud_; }
  const KdTree& tree() const { return tree_; }
  int dim() const { return cloud_.dim(); }

 private:
  PointCloud cloud_;
  KdTree tree_;
};

struct MLSProjection {
  std::vector<double> foot;  // closest point on the local patch
  double distance = 0;       // |p - foot|
  std::vector<double> normal;  // reference plane normal
  int neighbors = 0;
  int plane_iterations = 0;
};

// Moving least-squares projection of p onto the surface sampled by the cloud.
// Weights are centred at the running foot estimate (seeded at the nearest
// cloud point), so p may lie several support radii away from the cloud.
MLSProjection mls_project(std::span<const double> p, const IndexedCloud& cloud,
                          const MLSConfig& cfg);
MLSProjection mls_project(std::span<const double> p, const PointCloud& cloud,
                          const MLSConfig& cfg);

// Signed distances on the (N+1)^(d+1) lattice (i h, j_1 h, ..., j_d h), t axis
// first, last axis fastest. Positive inside the graph.
struct SignedDistanceGrid {
  int dim = 0;  // d + 1
  int N = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> far;  // 1 where the magnitude is the nearest-point distance
  std::size_t fallbacks = 0;      // MLS failures replaced by nearest-point distance

  int n() const { return N + 1; }
  std::size_t far_count() const;
};

// Magnitude from mls_project; points further than 3 (m + 1) h from the cloud
// use the nearest-point distance and are flagged. The sign is membership of
// (j_1 h, ..., j_d h) in sample i. Sample grids must be Grid kind.
SignedDistanceGrid build_signed_grid(const SampledSVF& svf, const PointCloud& cloud,
                                     const MLSConfig& cfg);

}  // namespace svf

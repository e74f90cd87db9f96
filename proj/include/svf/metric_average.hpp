// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "svf/geom.hpp"
#include "svf/svf1d.hpp"

namespace svf {

// Pairs (a, b) of A x B where b is a nearest point of B to a, or a is a
// nearest point of A to b.
struct MetricPairSet {
  int dim = 0;
  std::vector<double> a;  // dim coordinates per pair
  std::vector<double> b;

  std::size_t size() const { return dim == 0 ? 0 : a.size() / dim; }
};

// A (+)_w B = {(1 - w) a + w b : (a, b) metric pair}. Exact: the nearest
// point map onto a union of intervals is piecewise constant or the identity,
// so the result is a finite union of affine images. Throws EmptySet.
IntervalUnion metric_average_1d(const IntervalUnion& A, const IntervalUnion& B, double w);

// In-set nodes of g resampled on a lattice with n nodes per axis.
PointCloud in_set_nodes(const GridSet& g, int n);

// Metric pairs of two finite point sets (all nearest-point ties included).
MetricPairSet metric_pairs(const PointCloud& A, const PointCloud& B);

// Raster metric average of two d = 2 sets: in-set nodes at `resolution` nodes
// per axis, metric pairs both ways, blended points snapped to the lattice and
// closed with a 3 x 3 structuring element. Node values are +-half a cell.
GridSet metric_average_grid(const GridSet& A, const GridSet& B, double w, int resolution = 0);

struct MetricGraphConfig {
  int s = 4;
  double spacing_floor = 1.0 / 1024;  // tau spacing is max(h^s, spacing_floor)
  int resolution = 129;               // raster nodes per axis
  Svf1dConfig svf1d;
};

struct MetricGraphMetadata {
  double tau_spacing = 0;
  bool floor_applied = false;
  double lipschitz_estimate = 0;  // max d_Haus(F(t_i), F(t_i+1)) / h over non-empty pairs
  int empty_frames = 0;
  int empty_operand_segments = 0;  // segments with exactly one empty end
};

// Piecewise metric-average interpolant of the reconstructed F~(tau_j).
class MetricAverageGraph {
 public:
  int resolution() const { return resolution_; }
  std::size_t frame_count() const { return frames_.size(); }
  double tau(std::size_t j) const { return static_cast<double>(j) * meta_.tau_spacing; }
  const MetricGraphMetadata& metadata() const { return meta_; }

  GridSet frame(std::size_t j) const;
  bool frame_empty(std::size_t j) const;
  // Stored frame at a tau node; metric average of the two bracketing frames
  // elsewhere. When one end is empty the other is eroded by L^ |t - tau|.
  GridSet evaluate(double t) const;

 private:
  friend MetricAverageGraph build_graph_by_metric_average(const SampledSVF&, const MetricGraphConfig&);

  int resolution_ = 0;
  std::vector<std::vector<std::uint8_t>> frames_;
  MetricGraphMetadata meta_;
};

MetricAverageGraph build_graph_by_metric_average(const SampledSVF& svf, const MetricGraphConfig& cfg = {});

}  // namespace svf

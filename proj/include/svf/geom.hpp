// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace svf {

// Intervals closer than this are fused during normalization.
inline constexpr double kMergeTolerance = 1e-9;

struct Interval {
  double lo = 0;
  double hi = 0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// A compact subset of the real line stored as sorted, pairwise disjoint closed
// intervals separated by gaps larger than kMergeTolerance. The empty union is
// a valid value.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(std::initializer_list<Interval> raw);
  explicit IntervalUnion(std::vector<Interval> raw);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  bool contains(double y) const;
  // Distance from y to the set; 0 inside. Requires a non-empty set.
  double distance(double y) const;
  // Sorted endpoints lo0, hi0, lo1, hi1, ...
  std::vector<double> endpoints() const;
  double min() const { return intervals_.front().lo; }
  double max() const { return intervals_.back().hi; }

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> intervals_;
};

IntervalUnion normalize(const IntervalUnion& u);
// Closure of [0,1] minus u; zero-length pieces at the domain ends are dropped.
IntervalUnion complement_in_unit(const IntervalUnion& u);

// Exact Hausdorff distance between non-empty interval unions.
double hausdorff_1d(const IntervalUnion& a, const IntervalUnion& b);
// sup over a in A of dist(a, B).
double directed_hausdorff_1d(const IntervalUnion& a, const IntervalUnion& b);

// Real values on the uniform grid of n points per axis over [0,1]^d, row-major
// with the last axis varying fastest. A point belongs to the set iff G >= 0.
class GridSet {
 public:
  GridSet() = default;
  GridSet(int dim, int n_per_axis, std::vector<double> values);

  // Fills the grid by evaluating g at every node.
  static GridSet sample(int dim, int n_per_axis,
                        const std::function<double(std::span<const double>)>& g);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double spacing() const { return 1.0 / (n_ - 1); }
  std::size_t node_count() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  double node_value(std::span<const int> index) const;
  std::size_t flat_index(std::span<const int> index) const;
  void unflatten(std::size_t flat, std::span<int> index) const;
  double coordinate(int i) const { return static_cast<double>(i) / (n_ - 1); }

  // Local cubic (4-node Lagrange) interpolation along every axis; reproduces
  // node values exactly at nodes.
  double value_at(std::span<const double> x) const;
  bool contains(std::span<const double> x) const { return value_at(x) >= 0; }

  friend bool operator==(const GridSet&, const GridSet&) = default;

 private:
  int dim_ = 0;
  int n_ = 0;
  std::vector<double> values_;
};

// Stencil of the local cubic interpolant on a uniform grid with n nodes:
// first node index and four Lagrange weights for grid coordinate u.
struct CubicStencil {
  int first = 0;
  int count = 0;
  double weight[4] = {0, 0, 0, 0};
};
CubicStencil cubic_stencil(double u, int n);

// Zero set of a 1D grid function as an interval union: sign changes between
// nodes are refined by bisection + Newton on the local cubic interpolant.
IntervalUnion intervals_from_line(std::span<const double> values);

// Restriction of g to the hyperplane x_axis = tau. Off-grid tau uses cubic
// interpolation along the axis. Returns an IntervalUnion when the result is
// one-dimensional.
std::variant<GridSet, IntervalUnion> slice_gridset(const GridSet& g, int axis, double tau);
GridSet slice_values(const GridSet& g, int axis, double tau);

// F ∩ {x_2 = c_0, ..., x_d = c_{d-2}}: the 1D section along the first axis.
IntervalUnion line_section(const GridSet& g, std::span<const double> fixed);
// The same along `axis`; `fixed` holds the other coordinates in axis order.
IntervalUnion line_section(const GridSet& g, int axis, std::span<const double> fixed);

enum class SampleKind { Intervals, Grid };

// The input: N + 1 sets at t_i = i / N.
class SampledSVF {
 public:
  SampledSVF() = default;
  static SampledSVF from_intervals(std::vector<IntervalUnion> samples);
  static SampledSVF from_grids(std::vector<GridSet> samples);

  int dim() const { return dim_; }
  int N() const { return static_cast<int>(count()) - 1; }
  double h() const { return 1.0 / N(); }
  double t(int i) const { return static_cast<double>(i) / N(); }
  std::size_t count() const { return kind_ == SampleKind::Intervals ? intervals_.size() : grids_.size(); }
  SampleKind kind() const { return kind_; }

  const IntervalUnion& interval(int i) const { return intervals_.at(i); }
  const GridSet& grid(int i) const { return grids_.at(i); }
  const std::vector<IntervalUnion>& intervals() const { return intervals_; }
  const std::vector<GridSet>& grids() const { return grids_; }
  int n_per_axis() const { return grids_.empty() ? 0 : grids_.front().n(); }

  friend bool operator==(const SampledSVF&, const SampledSVF&) = default;

 private:
  int dim_ = 0;
  SampleKind kind_ = SampleKind::Intervals;
  std::vector<IntervalUnion> intervals_;
  std::vector<GridSet> grids_;
};

enum class PointSource { SampleBoundary, LineSectionCurve, Other };

// Points in [0,1]^dim with a provenance tag per point.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return tags_.size(); }
  bool empty() const { return tags_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  PointSource tag(std::size_t i) const { return tags_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<PointSource>& tags() const { return tags_; }

  void add(std::span<const double> p, PointSource tag = PointSource::Other);
  void append(const PointCloud& other);
  std::size_t count(PointSource tag) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<PointSource> tags_;
};

double hausdorff_points(const PointCloud& a, const PointCloud& b);
double directed_hausdorff_points(const PointCloud& a, const PointCloud& b);

// Twice the largest distance from a reference-surface sample to the cloud,
// i.e. the diameter of the largest empty ball centred on the surface.
double fill_distance(const PointCloud& cloud, const PointCloud& surface_samples);

enum class PctKind { A, B };

// A point of topology change located in strip [i h, (i + 1) h].
struct PCT {
  double t_star = 0;
  double y_star = 0;
  PctKind kind = PctKind::A;
  int strip = 0;
};

struct TimedValue {
  double t = 0;
  double y = 0;
};

// Region u < y < v over (c, d) missing from the graph, bounded by two
// boundary curves that meet at both ends.
struct Hole {
  double c = 0;
  double d = 0;
  std::vector<TimedValue> lower;
  std::vector<TimedValue> upper;
};

}  // namespace svf

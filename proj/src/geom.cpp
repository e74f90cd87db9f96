// SPDX-License-Identifier: Apache-2.0
#include "svf/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svf/error.hpp"
#include "svf/kdtree.hpp"
#include "svf/roots.hpp"

namespace svf {

// ---------------------------------------------------------------------------
// IntervalUnion

namespace {

std::vector<Interval> normalized(std::vector<Interval> raw) {
  for (const auto& iv : raw) {
    if (!(iv.lo <= iv.hi))
      fail(ErrorCode::InvalidArgument,
           "interval with lo > hi: [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]");
  }
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  out.reserve(raw.size());
  for (const auto& iv : raw) {
    if (!out.empty() && iv.lo - out.back().hi <= kMergeTolerance)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace

IntervalUnion::IntervalUnion(std::initializer_list<Interval> raw)
    : intervals_(normalized(std::vector<Interval>(raw))) {}

IntervalUnion::IntervalUnion(std::vector<Interval> raw) : intervals_(normalized(std::move(raw))) {}

bool IntervalUnion::contains(double y) const {
  for (const auto& iv : intervals_)
    if (iv.lo <= y && y <= iv.hi) return true;
  return false;
}

double IntervalUnion::distance(double y) const {
  if (intervals_.empty()) fail(ErrorCode::EmptySet, "distance to an empty set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals_) {
    if (y < iv.lo)
      best = std::min(best, iv.lo - y);
    else if (y > iv.hi)
      best = std::min(best, y - iv.hi);
    else
      return 0;
  }
  return best;
}

std::vector<double> IntervalUnion::endpoints() const {
  std::vector<double> out;
  out.reserve(2 * intervals_.size());
  for (const auto& iv : intervals_) {
    out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

IntervalUnion normalize(const IntervalUnion& u) { return IntervalUnion(u.intervals()); }

IntervalUnion complement_in_unit(const IntervalUnion& u) {
  std::vector<Interval> out;
  double cursor = 0;
  for (const auto& iv : u.intervals()) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = std::max(cursor, iv.hi);
  }
  if (cursor < 1) out.push_back({cursor, 1});
  return IntervalUnion(std::move(out));
}

double directed_hausdorff_1d(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptySet, "Hausdorff distance with an empty set");
  // dist(., B) is piecewise linear; on each interval of A its maximum sits at
  // an endpoint or at the point closest to the midpoint of a gap of B.
  double best = 0;
  const auto& bi = b.intervals();
  for (const auto& iv : a.intervals()) {
    best = std::max({best, b.distance(iv.lo), b.distance(iv.hi)});
    for (std::size_t g = 0; g + 1 < bi.size(); ++g) {
      const double mid = 0.5 * (bi[g].hi + bi[g + 1].lo);
      best = std::max(best, b.distance(std::clamp(mid, iv.lo, iv.hi)));
    }
  }
  return best;
}

double hausdorff_1d(const IntervalUnion& a, const IntervalUnion& b) {
  return std::max(directed_hausdorff_1d(a, b), directed_hausdorff_1d(b, a));
}

// ---------------------------------------------------------------------------
// GridSet

GridSet::GridSet(int dim, int n_per_axis, std::vector<double> values)
    : dim_(dim), n_(n_per_axis), values_(std::move(values)) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "GridSet dimension must be >= 1");
  if (n_per_axis < 2) fail(ErrorCode::InvalidArgument, "GridSet needs at least 2 nodes per axis");
  std::size_t expected = 1;
  for (int a = 0; a < dim; ++a) expected *= static_cast<std::size_t>(n_per_axis);
  if (values_.size() != expected)
    fail(ErrorCode::DimensionMismatch, "GridSet payload has " + std::to_string(values_.size()) +
                                           " values, expected " + std::to_string(expected));
}

GridSet GridSet::sample(int dim, int n_per_axis,
                        const std::function<double(std::span<const double>)>& g) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n_per_axis);
  std::vector<double> values(total);
  std::vector<double> x(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int a = dim - 1; a >= 0; --a) {
      x[a] = static_cast<double>(rest % n_per_axis) / (n_per_axis - 1);
      rest /= n_per_axis;
    }
    values[flat] = g(x);
  }
  return GridSet(dim, n_per_axis, std::move(values));
}

std::size_t GridSet::flat_index(std::span<const int> index) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_ + static_cast<std::size_t>(index[a]);
  return flat;
}

void GridSet::unflatten(std::size_t flat, std::span<int> index) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    index[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
}

double GridSet::node_value(std::span<const int> index) const { return values_[flat_index(index)]; }

CubicStencil cubic_stencil(double u, int n) {
  CubicStencil s;
  const double snapped = std::round(u);
  if (std::abs(u - snapped) < 1e-9) u = snapped;
  s.count = std::min(4, n);
  int cell = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
  s.first = std::clamp(cell - 1, 0, n - s.count);
  for (int j = 0; j < s.count; ++j) {
    double w = 1;
    const double uj = s.first + j;
    for (int k = 0; k < s.count; ++k) {
      if (k == j) continue;
      const double uk = s.first + k;
      w *= (u - uk) / (uj - uk);
    }
    s.weight[j] = w;
  }
  return s;
}

double GridSet::value_at(std::span<const double> x) const {
  std::vector<CubicStencil> st(dim_);
  for (int a = 0; a < dim_; ++a) st[a] = cubic_stencil(x[a] * (n_ - 1), n_);
  // Walk the tensor stencil with an odometer.
  std::vector<int> k(dim_, 0);
  std::vector<int> idx(dim_);
  double sum = 0;
  while (true) {
    double w = 1;
    for (int a = 0; a < dim_; ++a) {
      idx[a] = st[a].first + k[a];
      w *= st[a].weight[k[a]];
    }
    if (w != 0) sum += w * node_value(idx);
    int a = dim_ - 1;
    while (a >= 0 && ++k[a] == st[a].count) k[a--] = 0;
    if (a < 0) break;
  }
  return sum;
}

namespace {

// Local cubic interpolant of a 1D node array at grid coordinate u, with its
// derivative.
std::pair<double, double> line_interp(std::span<const double> v, double u) {
  const int n = static_cast<int>(v.size());
  const int cell = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
  const int count = std::min(4, n);
  const int first = std::clamp(cell - 1, 0, n - count);
  double f = 0;
  double df = 0;
  for (int j = 0; j < count; ++j) {
    const double uj = first + j;
    double w = 1;
    double dw = 0;
    for (int k = 0; k < count; ++k) {
      if (k == j) continue;
      const double uk = first + k;
      const double factor = (u - uk) / (uj - uk);
      dw = dw * factor + w / (uj - uk);
      w *= factor;
    }
    f += w * v[first + j];
    df += dw * v[first + j];
  }
  return {f, df};
}

}  // namespace

IntervalUnion intervals_from_line(std::span<const double> v) {
  const int n = static_cast<int>(v.size());
  if (n < 2) fail(ErrorCode::InvalidArgument, "line needs at least 2 nodes");
  const double scale = 1.0 / (n - 1);
  std::vector<Interval> out;
  bool inside = v[0] >= 0;
  double start = 0;
  for (int j = 0; j + 1 < n; ++j) {
    if (std::isnan(v[j]) || std::isnan(v[j + 1]))
      fail(ErrorCode::DegenerateRoot, "NaN grid value at node " + std::to_string(j));
    const bool next_inside = v[j + 1] >= 0;
    if (next_inside == inside) continue;
    // Within the cell the interpolant is a single cubic bracketed by the node
    // signs; an exact zero at a node is a boundary point at that node.
    const double root = bisect_newton(
        [&](double u) { return line_interp(v, std::clamp(u, double(j), double(j + 1))); }, j,
        j + 1, kRootTolerance * (n - 1));
    const double x = std::clamp(root * scale, 0.0, 1.0);
    if (inside) {
      out.push_back({start, x});
    } else {
      start = x;
    }
    inside = next_inside;
  }
  if (inside) out.push_back({start, 1.0});
  return IntervalUnion(std::move(out));
}

GridSet slice_values(const GridSet& g, int axis, double tau) {
  const int d = g.dim();
  if (d < 2) fail(ErrorCode::DimensionUnsupported, "cannot slice a 1D GridSet");
  if (axis < 0 || axis >= d) fail(ErrorCode::InvalidArgument, "slice axis out of range");
  if (tau < 0 || tau > 1) fail(ErrorCode::OutOfDomain, "slice value outside [0,1]");
  const int n = g.n();
  const CubicStencil st = cubic_stencil(tau * (n - 1), n);
  std::size_t total = 1;
  for (int a = 0; a < d - 1; ++a) total *= static_cast<std::size_t>(n);
  std::vector<double> out(total);
  std::vector<int> sub(d - 1);
  std::vector<int> full(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int a = d - 2; a >= 0; --a) {
      sub[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    for (int a = 0, b = 0; a < d; ++a) full[a] = a == axis ? 0 : sub[b++];
    double s = 0;
    for (int k = 0; k < st.count; ++k) {
      if (st.weight[k] == 0) continue;
      full[axis] = st.first + k;
      s += st.weight[k] * g.node_value(full);
    }
    out[flat] = s;
  }
  return GridSet(d - 1, n, std::move(out));
}

std::variant<GridSet, IntervalUnion> slice_gridset(const GridSet& g, int axis, double tau) {
  GridSet s = slice_values(g, axis, tau);
  if (s.dim() == 1) return intervals_from_line(s.values());
  return s;
}

IntervalUnion line_section(const GridSet& g, std::span<const double> fixed) {
  return line_section(g, 0, fixed);
}

IntervalUnion line_section(const GridSet& g, int axis, std::span<const double> fixed) {
  const int d = g.dim();
  if (static_cast<int>(fixed.size()) != d - 1)
    fail(ErrorCode::DimensionMismatch, "line_section needs d-1 fixed coordinates");
  if (axis < 0 || axis >= d) fail(ErrorCode::InvalidArgument, "section axis out of range");
  if (d == 1) return intervals_from_line(g.values());
  const int n = g.n();
  std::vector<int> other;
  for (int a = 0; a < d; ++a)
    if (a != axis) other.push_back(a);
  std::vector<CubicStencil> st(d - 1);
  for (int a = 0; a < d - 1; ++a) {
    if (fixed[a] < 0 || fixed[a] > 1) fail(ErrorCode::OutOfDomain, "section coordinate outside [0,1]");
    st[a] = cubic_stencil(fixed[a] * (n - 1), n);
  }
  std::vector<double> line(n, 0.0);
  std::vector<int> k(d - 1, 0);
  std::vector<int> idx(d);
  while (true) {
    double w = 1;
    for (int a = 0; a < d - 1; ++a) {
      idx[other[a]] = st[a].first + k[a];
      w *= st[a].weight[k[a]];
    }
    if (w != 0) {
      for (int j = 0; j < n; ++j) {
        idx[axis] = j;
        line[j] += w * g.node_value(idx);
      }
    }
    int a = d - 2;
    while (a >= 0 && ++k[a] == st[a].count) k[a--] = 0;
    if (a < 0) break;
  }
  return intervals_from_line(line);
}

// ---------------------------------------------------------------------------
// SampledSVF

SampledSVF SampledSVF::from_intervals(std::vector<IntervalUnion> samples) {
  if (samples.size() < 2) fail(ErrorCode::InvalidArgument, "need at least 2 samples (N >= 1)");
  SampledSVF s;
  s.dim_ = 1;
  s.kind_ = SampleKind::Intervals;
  s.intervals_ = std::move(samples);
  return s;
}

SampledSVF SampledSVF::from_grids(std::vector<GridSet> samples) {
  if (samples.size() < 2) fail(ErrorCode::InvalidArgument, "need at least 2 samples (N >= 1)");
  for (const auto& g : samples) {
    if (g.dim() != samples.front().dim() || g.n() != samples.front().n())
      fail(ErrorCode::DimensionMismatch, "all GridSet samples must share dimension and resolution");
  }
  SampledSVF s;
  s.dim_ = samples.front().dim();
  s.kind_ = SampleKind::Grid;
  s.grids_ = std::move(samples);
  return s;
}

// ---------------------------------------------------------------------------
// PointCloud

void PointCloud::add(std::span<const double> p, PointSource tag) {
  if (static_cast<int>(p.size()) != dim_)
    fail(ErrorCode::DimensionMismatch, "point dimension does not match cloud");
  coords_.insert(coords_.end(), p.begin(), p.end());
  tags_.push_back(tag);
}

void PointCloud::append(const PointCloud& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) fail(ErrorCode::DimensionMismatch, "cannot merge clouds of different dimension");
  coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
  tags_.insert(tags_.end(), other.tags_.begin(), other.tags_.end());
}

std::size_t PointCloud::count(PointSource tag) const {
  return static_cast<std::size_t>(std::count(tags_.begin(), tags_.end(), tag));
}

double directed_hausdorff_points(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptySet, "Hausdorff distance with an empty cloud");
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "cloud dimensions differ");
  KdTree tree(b.dim(), b.coords());
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, tree.nearest(a.point(i)).dist2);
  return std::sqrt(worst);
}

double hausdorff_points(const PointCloud& a, const PointCloud& b) {
  return std::max(directed_hausdorff_points(a, b), directed_hausdorff_points(b, a));
}

double fill_distance(const PointCloud& cloud, const PointCloud& surface_samples) {
  return 2.0 * directed_hausdorff_points(surface_samples, cloud);
}

}  // namespace svf

// SPDX-License-Identifier: Apache-2.0
#include "svf/metric_average.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svf/error.hpp"
#include "svf/kdtree.hpp"
#include "svf/parallel.hpp"
#include "svf/reconstruct.hpp"

namespace svf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Piece of the real line on which the nearest point map onto a set is either
// the identity or the constant c.
struct Region {
  double lo, hi;
  bool identity;
  double c;
};

std::vector<Region> nearest_map_regions(const IntervalUnion& s) {
  const auto& iv = s.intervals();
  std::vector<Region> out;
  out.push_back({-kInf, iv.front().lo, false, iv.front().lo});
  for (std::size_t k = 0; k < iv.size(); ++k) {
    out.push_back({iv[k].lo, iv[k].hi, true, 0});
    if (k + 1 < iv.size()) {
      const double mid = 0.5 * (iv[k].hi + iv[k + 1].lo);
      out.push_back({iv[k].hi, mid, false, iv[k].hi});
      out.push_back({mid, iv[k + 1].lo, false, iv[k + 1].lo});
    }
  }
  out.push_back({iv.back().hi, kInf, false, iv.back().hi});
  return out;
}

// Blends wf x + wt c of from-points x with their nearest points c in `to`.
void blend_pieces(const IntervalUnion& from, const IntervalUnion& to, double wf, double wt,
                  std::vector<Interval>& out) {
  const auto regions = nearest_map_regions(to);
  for (const auto& a : from.intervals()) {
    for (const auto& r : regions) {
      const double p = std::max(a.lo, r.lo), q = std::min(a.hi, r.hi);
      if (p > q) continue;
      if (r.identity || wt == 0)
        out.push_back({p, q});
      else
        out.push_back({r.c + wf * (p - r.c), r.c + wf * (q - r.c)});
    }
  }
}

std::size_t node_count2(int n) { return static_cast<std::size_t>(n) * n; }

std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& m, int n) {
  std::vector<std::uint8_t> out(m.size(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!m[static_cast<std::size_t>(a) * n + b]) continue;
      for (int da = std::max(a - 1, 0); da <= std::min(a + 1, n - 1); ++da)
        for (int db = std::max(b - 1, 0); db <= std::min(b + 1, n - 1); ++db)
          out[static_cast<std::size_t>(da) * n + db] = 1;
    }
  return out;
}

std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& m, int n) {
  std::vector<std::uint8_t> out(m.size(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool all = true;
      for (int da = std::max(a - 1, 0); da <= std::min(a + 1, n - 1) && all; ++da)
        for (int db = std::max(b - 1, 0); db <= std::min(b + 1, n - 1); ++db)
          if (!m[static_cast<std::size_t>(da) * n + db]) {
            all = false;
            break;
          }
      out[static_cast<std::size_t>(a) * n + b] = all;
    }
  return out;
}

GridSet mask_to_grid(const std::vector<std::uint8_t>& m, int n) {
  const double half = 0.5 / (n - 1);
  std::vector<double> v(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) v[k] = m[k] ? half : -half;
  return GridSet(2, n, std::move(v));
}

std::vector<std::uint8_t> grid_to_mask(const GridSet& g, int n) {
  std::vector<std::uint8_t> m(node_count2(n), 0);
  if (g.n() == n) {
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = g.values()[k] >= 0;
    return m;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double x[2] = {static_cast<double>(a) / (n - 1), static_cast<double>(b) / (n - 1)};
      m[static_cast<std::size_t>(a) * n + b] = g.contains(x);
    }
  return m;
}

PointCloud mask_points(const std::vector<std::uint8_t>& m, int n, bool value) {
  PointCloud pc(2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (static_cast<bool>(m[static_cast<std::size_t>(a) * n + b]) == value) {
        const double x[2] = {static_cast<double>(a) / (n - 1), static_cast<double>(b) / (n - 1)};
        pc.add(x);
      }
  return pc;
}

// Nodes farther than r from every out-of-set node.
std::vector<std::uint8_t> erode_by(const std::vector<std::uint8_t>& m, int n, double r) {
  if (r <= 0) return m;
  const PointCloud outside = mask_points(m, n, false);
  if (outside.empty()) return m;
  const KdTree tree(2, outside.coords());
  std::vector<std::uint8_t> out(m.size(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::size_t k = static_cast<std::size_t>(a) * n + b;
      if (!m[k]) continue;
      const double x[2] = {static_cast<double>(a) / (n - 1), static_cast<double>(b) / (n - 1)};
      out[k] = tree.nearest(x).dist2 > r * r;
    }
  return out;
}

std::vector<std::uint8_t> average_masks(const std::vector<std::uint8_t>& A,
                                        const std::vector<std::uint8_t>& B, double w, int n) {
  const PointCloud pa = mask_points(A, n, true), pb = mask_points(B, n, true);
  if (pa.empty() || pb.empty()) fail(ErrorCode::EmptySet, "metric average of an empty set");
  const MetricPairSet pairs = metric_pairs(pa, pb);
  std::vector<std::uint8_t> out(node_count2(n), 0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    int idx[2];
    for (int c = 0; c < 2; ++c) {
      const double x = (1 - w) * pairs.a[2 * k + c] + w * pairs.b[2 * k + c];
      idx[c] = std::clamp(static_cast<int>(std::lround(x * (n - 1))), 0, n - 1);
    }
    out[static_cast<std::size_t>(idx[0]) * n + idx[1]] = 1;
  }
  return erode(dilate(out, n), n);
}

}  // namespace

IntervalUnion metric_average_1d(const IntervalUnion& A, const IntervalUnion& B, double w) {
  if (A.empty() || B.empty()) fail(ErrorCode::EmptySet, "metric average of an empty set");
  if (!(w >= 0 && w <= 1)) fail(ErrorCode::InvalidArgument, "weight outside [0, 1]");
  std::vector<Interval> pieces;
  blend_pieces(A, B, 1 - w, w, pieces);
  blend_pieces(B, A, w, 1 - w, pieces);
  return IntervalUnion(std::move(pieces));
}

PointCloud in_set_nodes(const GridSet& g, int n) {
  if (g.dim() != 2) fail(ErrorCode::DimensionUnsupported, "metric averages need 2D sets");
  if (n < 2) fail(ErrorCode::InvalidArgument, "resolution must be at least 2");
  return mask_points(grid_to_mask(g, n), n, true);
}

MetricPairSet metric_pairs(const PointCloud& A, const PointCloud& B) {
  if (A.dim() != B.dim()) fail(ErrorCode::DimensionMismatch, "point sets of different dimension");
  if (A.empty() || B.empty()) fail(ErrorCode::EmptySet, "metric pairs of an empty set");
  const int d = A.dim();
  MetricPairSet out;
  out.dim = d;
  const KdTree ta(d, A.coords()), tb(d, B.coords());
  auto add = [&](std::span<const double> a, std::span<const double> b) {
    out.a.insert(out.a.end(), a.begin(), a.end());
    out.b.insert(out.b.end(), b.begin(), b.end());
  };
  auto ties = [](const KdTree& t, std::span<const double> q) {
    const double r = std::sqrt(t.nearest(q).dist2);
    return t.radius(q, r * (1 + 1e-12) + 1e-15);
  };
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j : ties(tb, A.point(i))) add(A.point(i), B.point(j));
  for (std::size_t j = 0; j < B.size(); ++j)
    for (std::size_t i : ties(ta, B.point(j))) add(A.point(i), B.point(j));
  return out;
}

GridSet metric_average_grid(const GridSet& A, const GridSet& B, double w, int resolution) {
  if (A.dim() != 2 || B.dim() != 2) fail(ErrorCode::DimensionUnsupported, "metric averages need 2D sets");
  if (!(w >= 0 && w <= 1)) fail(ErrorCode::InvalidArgument, "weight outside [0, 1]");
  const int n = resolution > 0 ? resolution : std::max(A.n(), B.n());
  if (n < 2) fail(ErrorCode::InvalidArgument, "resolution must be at least 2");
  return mask_to_grid(average_masks(grid_to_mask(A, n), grid_to_mask(B, n), w, n), n);
}

GridSet MetricAverageGraph::frame(std::size_t j) const { return mask_to_grid(frames_.at(j), resolution_); }

bool MetricAverageGraph::frame_empty(std::size_t j) const {
  const auto& f = frames_.at(j);
  return std::none_of(f.begin(), f.end(), [](std::uint8_t v) { return v != 0; });
}

GridSet MetricAverageGraph::evaluate(double t) const {
  if (!(t >= 0 && t <= 1)) fail(ErrorCode::OutOfDomain, "t outside [0, 1]");
  const std::size_t M = frames_.size() - 1;
  const double u = t / meta_.tau_spacing;
  const std::size_t j = std::min(static_cast<std::size_t>(std::floor(u)), M - 1);
  const double w = u - static_cast<double>(j);
  if (w <= 0) return frame(j);
  if (w >= 1) return frame(j + 1);
  const bool e0 = frame_empty(j), e1 = frame_empty(j + 1);
  if (e0 && e1) return frame(j);
  if (e0 || e1) {
    const std::size_t keep = e0 ? j + 1 : j;
    const double r = meta_.lipschitz_estimate * std::abs(t - tau(keep));
    return mask_to_grid(erode_by(frames_[keep], resolution_, r), resolution_);
  }
  return mask_to_grid(average_masks(frames_[j], frames_[j + 1], w, resolution_), resolution_);
}

MetricAverageGraph build_graph_by_metric_average(const SampledSVF& svf, const MetricGraphConfig& cfg) {
  if (svf.dim() != 2 || svf.kind() != SampleKind::Grid)
    fail(ErrorCode::DimensionMismatch, "metric-average graph needs d = 2 grid samples");
  if (cfg.s < 1) fail(ErrorCode::InvalidArgument, "s must be positive");
  if (cfg.resolution < 2) fail(ErrorCode::InvalidArgument, "resolution must be at least 2");
  const int n = cfg.resolution;
  const double h = svf.h();
  const double literal = std::pow(h, cfg.s);

  MetricAverageGraph g;
  g.resolution_ = n;
  auto& meta = g.meta_;
  meta.floor_applied = literal < cfg.spacing_floor;
  const double spacing = std::max(literal, cfg.spacing_floor);
  const auto M = static_cast<std::size_t>(std::max(1.0, std::ceil(1 / spacing - 1e-9)));
  meta.tau_spacing = 1.0 / static_cast<double>(M);

  const TwoStage stage(svf, cfg.svf1d);
  g.frames_.resize(M + 1);
  parallel_for(M + 1, [&](std::size_t j) {
    const double t = std::min(1.0, static_cast<double>(j) * meta.tau_spacing);
    g.frames_[j] = grid_to_mask(stage.evaluate(t).raster(n), n);
  });

  std::vector<double> steps(svf.count() - 1, 0);
  parallel_for(steps.size(), [&](std::size_t i) {
    const PointCloud a = in_set_nodes(svf.grid(static_cast<int>(i)), n);
    const PointCloud b = in_set_nodes(svf.grid(static_cast<int>(i) + 1), n);
    if (!a.empty() && !b.empty()) steps[i] = hausdorff_points(a, b) / h;
  });
  meta.lipschitz_estimate = *std::max_element(steps.begin(), steps.end());

  for (std::size_t j = 0; j <= M; ++j) {
    const bool e = g.frame_empty(j);
    meta.empty_frames += e;
    if (j > 0 && e != g.frame_empty(j - 1)) ++meta.empty_operand_segments;
  }
  return g;
}

}  // namespace svf

// SPDX-License-Identifier: Apache-2.0
#include "svf/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svf/error.hpp"
#include "svf/parallel.hpp"

namespace svf {

namespace {

SectionReport summarize(const SVF1DApproximant& ap) {
  SectionReport r;
  r.built = true;
  const auto dg = ap.diagnostics();
  r.reliable_curves = dg.reliable_curves;
  r.unreliable_curves = dg.unreliable_curves;
  r.failed_pcts = dg.failed_pcts;
  return r;
}

bool all_empty(const SampledSVF& s) {
  for (const auto& u : s.intervals())
    if (!u.empty()) return false;
  return true;
}

// Multi-indices (j_2, ..., j_d) in lexicographic order.
std::vector<std::vector<int>> section_lines(int d, int N) {
  std::vector<std::vector<int>> out;
  std::vector<int> j(std::max(0, d - 1), 0);
  while (true) {
    out.push_back(j);
    int a = static_cast<int>(j.size()) - 1;
    while (a >= 0 && j[a] == N) j[a--] = 0;
    if (a < 0) break;
    ++j[a];
  }
  return out;
}

std::size_t lattice_size(int dim, int n) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  return total;
}

// Pseudo-sample for a line whose svf1d build or evaluation failed: endpoints
// interpolated linearly in t between the bracketing samples. An empty neighbour
// counts as the midpoint of each interval of the other; differing interval
// counts fall back to the nearest sample.
IntervalUnion fallback_section(const SampledSVF& line, double t) {
  const int N = line.N();
  const int i0 = std::clamp(static_cast<int>(std::floor(t * N)), 0, N - 1);
  const IntervalUnion& a = line.interval(i0);
  const IntervalUnion& b = line.interval(i0 + 1);
  const double w = std::clamp(t * N - i0, 0.0, 1.0);
  if (a.empty() && b.empty()) return {};
  auto collapse = [](const IntervalUnion& u) {
    std::vector<Interval> out;
    for (const auto& iv : u.intervals()) out.push_back({0.5 * (iv.lo + iv.hi), 0.5 * (iv.lo + iv.hi)});
    return out;
  };
  std::vector<Interval> lo = a.empty() ? collapse(b) : a.intervals();
  std::vector<Interval> hi = b.empty() ? collapse(a) : b.intervals();
  if (lo.size() != hi.size()) return w < 0.5 ? a : b;
  std::vector<Interval> out;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    const Interval iv{(1 - w) * lo[k].lo + w * hi[k].lo, (1 - w) * lo[k].hi + w * hi[k].hi};
    if (iv.hi > iv.lo) out.push_back(iv);
  }
  return IntervalUnion(std::move(out));
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const std::array<double, 3>& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

}  // namespace

int ReconstructDiagnostics::skipped_sections() const {
  int n = 0;
  for (const auto& s : sections) n += s.built ? 0 : 1;
  return n;
}

int ReconstructDiagnostics::reliable_curves() const {
  int n = 0;
  for (const auto& s : sections) n += s.reliable_curves;
  return n;
}

int ReconstructDiagnostics::unreliable_curves() const {
  int n = 0;
  for (const auto& s : sections) n += s.unreliable_curves;
  return n;
}

SampledSVF line_samples(const SampledSVF& svf, std::span<const int> line, int axis) {
  const int d = svf.dim();
  if (static_cast<int>(line.size()) != d - 1)
    fail(ErrorCode::DimensionMismatch, "a section line needs d - 1 indices");
  if (d == 1) return svf;
  std::vector<double> fixed(line.size());
  for (std::size_t a = 0; a < line.size(); ++a) {
    if (line[a] < 0 || line[a] > svf.N()) fail(ErrorCode::OutOfDomain, "section index out of range");
    fixed[a] = line[a] * svf.h();
  }
  std::vector<IntervalUnion> s(svf.count());
  if (axis < 0 || axis >= d) fail(ErrorCode::InvalidArgument, "section axis out of range");
  for (int i = 0; i <= svf.N(); ++i) s[i] = line_section(svf.grid(i), axis, fixed);
  return SampledSVF::from_intervals(std::move(s));
}

SVF1DApproximant stage1_line_sections(const SampledSVF& svf, int j, const Svf1dConfig& cfg) {
  if (svf.dim() != 2) fail(ErrorCode::DimensionMismatch, "stage one needs d = 2 samples");
  const int line[1] = {j};
  auto ap = build_approximant(line_samples(svf, line), cfg);
  const auto dg = ap.diagnostics();
  if (dg.reliable_curves == 0 && dg.unreliable_curves > 0)
    fail(ErrorCode::AllCurvesUnreliable, "no reliable curve on x_2 = " + std::to_string(j * svf.h()));
  return ap;
}

TwoStage::TwoStage(const SampledSVF& svf, const Svf1dConfig& cfg) : svf_(svf), cfg_(cfg) {
  if (svf.dim() != 2) fail(ErrorCode::DimensionMismatch, "two-stage evaluation needs d = 2");
  const int N = svf.N();
  lines_.resize(N + 1);
  reports_.resize(N + 1);
  parallel_for(N + 1, [&](std::size_t j) {
    reports_[j].line = {static_cast<int>(j)};
    try {
      auto ap = std::make_shared<const SVF1DApproximant>(
          stage1_line_sections(svf_, static_cast<int>(j), cfg_));
      reports_[j] = summarize(*ap);
      reports_[j].line = {static_cast<int>(j)};
      lines_[j] = std::move(ap);
    } catch (const Error& e) {
      reports_[j].failure = std::string(to_string(e.code()));
    }
  });
}

TwoStage::Result TwoStage::evaluate(double t) const {
  if (!(t >= 0 && t <= 1)) fail(ErrorCode::OutOfDomain, "t outside [0, 1]");
  const int N = svf_.N();
  std::vector<IntervalUnion> pseudo(N + 1);
  parallel_for(N + 1, [&](std::size_t j) {
    if (lines_[j]) {
      try {
        pseudo[j] = svf::evaluate(*lines_[j], t);
        return;
      } catch (const Error&) {
      }
    }
    const int line[1] = {static_cast<int>(j)};
    pseudo[j] = fallback_section(line_samples(svf_, line), t);
  });
  Result res{t, build_approximant(SampledSVF::from_intervals(std::move(pseudo)), cfg_), std::nullopt};
  const int i = static_cast<int>(std::lround(t * N));
  if (std::abs(t - svf_.t(i)) <= 1e-12) res.sample = svf_.grid(i);
  return res;
}

TwoStage::Result stage2_evaluate(const SampledSVF& svf, double t, const Svf1dConfig& cfg) {
  return TwoStage(svf, cfg).evaluate(t);
}

IntervalUnion TwoStage::Result::section(double x2) const {
  if (sample) {
    if (!(x2 >= 0 && x2 <= 1)) fail(ErrorCode::OutOfDomain, "x_2 outside [0, 1]");
    const double fixed[1] = {x2};
    return line_section(*sample, fixed);
  }
  return svf::evaluate(in_x2, x2);
}

GridSet TwoStage::Result::raster(int n) const {
  if (n < 2) fail(ErrorCode::InvalidArgument, "raster needs n >= 2");
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (int b = 0; b < n; ++b) {
    const double x2 = static_cast<double>(b) / (n - 1);
    const IntervalUnion s = section(x2);
    for (int a = 0; a < n; ++a) {
      const double x1 = static_cast<double>(a) / (n - 1);
      double v = -1;
      if (!s.empty()) {
        if (s.contains(x1)) {
          v = 1;
          for (double e : s.endpoints()) v = std::min(v, std::abs(e - x1));
        } else {
          v = -s.distance(x1);
        }
      }
      values[static_cast<std::size_t>(a) * n + b] = v;
    }
  }
  return GridSet(2, n, std::move(values));
}

Contour TwoStage::Result::boundary(int samples_per_curve) const {
  if (sample) {
    const GridSet& g = *sample;
    return extract_contour([&](std::span<const double> x) { return g.value_at(x); }, 4 * (g.n() - 1));
  }
  Contour c;
  const int M = std::max(samples_per_curve, 2);
  for (int k = 0; k < static_cast<int>(in_x2.curves().size()); ++k) {
    if (!in_x2.curves()[k].reliable) continue;
    const auto [lo, hi] = in_x2.curve_span(k);
    int prev = -1;
    for (int s = 0; s < M; ++s) {
      // Cosine spacing resolves the square-root behaviour at folds.
      const double x2 = lo + (hi - lo) * 0.5 * (1 - std::cos(std::numbers::pi * s / (M - 1)));
      const auto x1 = in_x2.curve_value(k, x2);
      if (!x1) {
        prev = -1;
        continue;
      }
      c.vertices.push_back({*x1, x2});
      const int id = static_cast<int>(c.vertices.size()) - 1;
      if (prev >= 0) c.segments.push_back({prev, id});
      prev = id;
    }
  }
  return c;
}

PointCloud collect_q0(const SampledSVF& svf) {
  const int d = svf.dim();
  PointCloud cloud(d + 1);
  for (int i = 0; i <= svf.N(); ++i) {
    const double t = svf.t(i);
    if (svf.kind() == SampleKind::Intervals) {
      for (double y : svf.interval(i).endpoints()) {
        const double p[2] = {t, y};
        cloud.add(p, PointSource::SampleBoundary);
      }
      continue;
    }
    const GridSet& g = svf.grid(i);
    const auto pts = zero_set_points([&](std::span<const double> x) { return g.value_at(x); }, d, g.n() - 1);
    std::vector<double> p(d + 1);
    p[0] = t;
    for (const auto& x : pts) {
      std::copy(x.begin(), x.end(), p.begin() + 1);
      cloud.add(p, PointSource::SampleBoundary);
    }
  }
  return cloud;
}

PointCloud collect_q1(const SampledSVF& svf, const Svf1dConfig& cfg,
                      std::vector<SectionReport>* reports, bool all_axes) {
  const int d = svf.dim();
  const double h = svf.h();
  std::vector<std::vector<int>> lines;
  std::vector<int> axes;
  for (int axis = 0; axis < (all_axes ? d : 1); ++axis)
    for (auto& l : section_lines(d, svf.N())) {
      lines.push_back(std::move(l));
      axes.push_back(axis);
    }
  std::vector<PointCloud> parts(lines.size(), PointCloud(d + 1));
  std::vector<SectionReport> rep(lines.size());

  parallel_for(lines.size(), [&](std::size_t li) {
    const int axis = axes[li];
    rep[li].axis = axis;
    rep[li].line = lines[li];
    const SampledSVF s = line_samples(svf, lines[li], axis);
    if (all_empty(s)) {
      rep[li].built = true;
      return;
    }
    SVF1DApproximant ap;
    try {
      ap = build_approximant(s, cfg);
    } catch (const Error& e) {
      rep[li].failure = std::string(to_string(e.code()));
      return;
    }
    rep[li] = summarize(ap);
    rep[li].axis = axis;
    rep[li].line = lines[li];

    std::vector<double> p(d + 1);
    for (int a = 0, o = 0; a < d; ++a)
      if (a != axis) p[1 + a] = lines[li][o++] * h;
    auto emit = [&](double t, double y) {
      p[0] = t;
      p[1 + axis] = y;
      parts[li].add(p, PointSource::LineSectionCurve);
    };
    const double dt = h / 16;
    for (int c = 0; c < static_cast<int>(ap.curves().size()); ++c) {
      if (!ap.curves()[c].reliable) continue;
      const auto [lo, hi] = ap.curve_span(c);
      const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / dt)));
      double last_t = lo, last_y = 0, run = 0;
      bool started = false;
      for (int k = 0; k <= steps; ++k) {
        const double t = k == steps ? hi : lo + k * (hi - lo) / steps;
        const auto y = ap.curve_value(c, t);
        if (!y) continue;
        if (!started) {
          emit(t, *y);
          started = true;
        } else {
          run += std::hypot(t - last_t, *y - last_y);
          if (run >= 0.5 * h || k == steps) {
            emit(t, *y);
            run = 0;
          }
        }
        last_t = t;
        last_y = *y;
      }
    }
  });

  PointCloud cloud(d + 1);
  for (const auto& part : parts) cloud.append(part);
  if (reports) *reports = std::move(rep);
  return cloud;
}

GraphApproximant build_graph_approximant(const SampledSVF& svf, const ReconstructConfig& cfg) {
  if (svf.N() < 2) fail(ErrorCode::IncompleteGrid, "need at least three samples");
  GraphApproximant ga;
  ga.d = svf.dim();
  ga.config = cfg;
  ga.q0 = collect_q0(svf);
  ga.q1 = collect_q1(svf, cfg.svf1d, &ga.diagnostics.sections, cfg.q1_all_axes);
  ga.diagnostics.q0_points = ga.q0.size();
  ga.diagnostics.q1_points = ga.q1.size();

  PointCloud all = ga.q0;
  all.append(ga.q1);
  if (all.empty()) fail(ErrorCode::EmptySet, "no boundary points: the graph is empty");
  const MLSConfig mls = MLSConfig::for_spacing(svf.h(), cfg.m, cfg.rho_factor);
  const SignedDistanceGrid grid = build_signed_grid(svf, all, mls);
  ga.diagnostics.far_nodes = grid.far_count();
  ga.diagnostics.mls_fallbacks = grid.fallbacks;
  ga.S = TensorSpline::build(cfg.m, ga.d + 1, svf.N(), grid.values);

  const int D = ga.d + 1, n = svf.N() + 1;
  std::vector<double> work = grid.values, at_nodes(work.size());
  for (int sweep = 0;; ++sweep) {
    parallel_for(at_nodes.size(), [&](std::size_t flat) {
      std::vector<double> p(D);
      std::size_t rest = flat;
      for (int a = D - 1; a >= 0; --a) {
        p[a] = static_cast<double>(rest % n) / (n - 1);
        rest /= n;
      }
      at_nodes[flat] = ga.S(p);
    });
    std::size_t wrong = 0;
    for (std::size_t f = 0; f < work.size(); ++f)
      if (grid.values[f] != 0 && (grid.values[f] > 0) != (at_nodes[f] >= 0)) ++wrong;
    ga.diagnostics.sign_mismatches = wrong;
    ga.diagnostics.sign_sweeps = sweep;
    if (wrong == 0 || sweep == cfg.sign_sweeps) break;
    for (std::size_t f = 0; f < work.size(); ++f) work[f] += grid.values[f] - at_nodes[f];
    ga.S = TensorSpline::build(cfg.m, D, svf.N(), work);
  }
  return ga;
}

bool inclusion(const GraphApproximant& ga, double t, std::span<const double> x) {
  if (static_cast<int>(x.size()) != ga.d) fail(ErrorCode::DimensionMismatch, "point dimension differs from d");
  std::vector<double> p(ga.d + 1);
  p[0] = t;
  std::copy(x.begin(), x.end(), p.begin() + 1);
  return ga.S(p) >= 0;
}

GridSet evaluate_set(const GraphApproximant& ga, double t, int n) {
  const int nn = n > 0 ? n : ga.S.N() + 1;
  if (nn < 2) fail(ErrorCode::InvalidArgument, "need n >= 2");
  std::vector<double> values(lattice_size(ga.d, nn));
  parallel_for(values.size(), [&](std::size_t flat) {
    std::vector<double> p(ga.d + 1);
    p[0] = t;
    std::size_t rest = flat;
    for (int a = ga.d; a >= 1; --a) {
      p[a] = static_cast<double>(rest % nn) / (nn - 1);
      rest /= nn;
    }
    values[flat] = ga.S(p);
  });
  return GridSet(ga.d, nn, std::move(values));
}

std::variant<Contour, TriangleMesh> extract_slice(const GraphApproximant& ga, double t, int cells) {
  const FixedAxis fixed[1] = {{0, t}};
  return zero_level_extract(ga.S, fixed, cells);
}

std::array<double, 3> tangent_plane_normal(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double na = norm3(a), nb = norm3(b);
  if (!(na > 0) || !(nb > 0)) fail(ErrorCode::DegenerateTangents, "zero tangent");
  auto n = cross(a, b);
  const double s = norm3(n) / (na * nb);  // sine of the angle between them
  if (!(s >= std::sin(5.0 * std::numbers::pi / 180)))
    fail(ErrorCode::DegenerateTangents, "tangents are within 5 degrees of parallel");
  const double len = norm3(n);
  for (double& v : n) v /= len;
  return n;
}

NormalsResult normals_at_curve_intersections(const SampledSVF& svf, const Svf1dConfig& cfg) {
  if (svf.dim() != 2 || svf.kind() != SampleKind::Grid)
    fail(ErrorCode::DimensionMismatch, "curve-net normals need d = 2 grid samples");
  const int N = svf.N();
  const double h = svf.h();
  std::vector<NormalsResult> per_line(N + 1);
  parallel_for(N + 1, [&](std::size_t j) {
    SVF1DApproximant ap;
    try {
      ap = stage1_line_sections(svf, static_cast<int>(j), cfg);
    } catch (const Error&) {
      return;
    }
    const double x2 = j * h;
    for (int c = 0; c < static_cast<int>(ap.curves().size()); ++c) {
      if (!ap.curves()[c].reliable) continue;
      for (int i = 0; i <= N; ++i) {
        const double t = i * h;
        const auto x1 = ap.curve_value(c, t);
        if (!x1) continue;
        const auto slope = ap.curve_slope(c, t);
        if (!slope) {
          ++per_line[j].degenerate;
          continue;
        }
        const GridSet& g = svf.grid(i);
        const double e = 1e-6;
        const double px[2] = {*x1 + e, x2}, mx[2] = {*x1 - e, x2};
        const double py[2] = {*x1, x2 + e}, my[2] = {*x1, x2 - e};
        const double g1 = (g.value_at(px) - g.value_at(mx)) / (2 * e);
        const double g2 = (g.value_at(py) - g.value_at(my)) / (2 * e);
        const std::array<double, 3> along_t = {1, *slope, 0};
        const std::array<double, 3> along_sample = {0, -g2, g1};
        try {
          auto n = tangent_plane_normal(along_t, along_sample);
          if (n[1] * g1 + n[2] * g2 > 0)
            for (double& v : n) v = -v;
          per_line[j].normals.push_back({{t, *x1, x2}, n});
        } catch (const Error&) {
          ++per_line[j].degenerate;
        }
      }
    }
  });
  NormalsResult out;
  for (auto& r : per_line) {
    out.normals.insert(out.normals.end(), r.normals.begin(), r.normals.end());
    out.degenerate += r.degenerate;
  }
  return out;
}

}  // namespace svf

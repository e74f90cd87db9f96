// SPDX-License-Identifier: Apache-2.0
#include "svf/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svf/error.hpp"
#include "svf/kdtree.hpp"
#include "svf/parallel.hpp"
#include "svf/roots.hpp"

namespace svf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_from(std::span<const double> p, std::span<const double> c) {
  double s = 0;
  for (std::size_t a = 0; a < p.size(); ++a) s += (p[a] - c[a]) * (p[a] - c[a]);
  return std::sqrt(s);
}

// Distance from the spatial part of p to the axis through (0.5, ..., 0.5).
double radial(std::span<const double> p) {
  double s = 0;
  for (std::size_t a = 1; a < p.size(); ++a) s += (p[a] - 0.5) * (p[a] - 0.5);
  return std::sqrt(s);
}

ScalarField ball_level(std::vector<double> center, double r) {
  return [center = std::move(center), r](std::span<const double> p) {
    return r - norm_from(p, center);
  };
}

std::vector<double> centre(int D, double t = 0.5) {
  std::vector<double> c(D, 0.5);
  c[0] = t;
  return c;
}

double hole_level(double y, double lo, double hi, double u, double v) {
  return std::min({y - lo, hi - y, std::max(u - y, y - v)});
}

double u_cross(double t) { return 0.35 + 0.1 * t + 0.05 * std::sin(3 * t); }
double v_cross(double t) { return 0.75 - 0.4 * t + 0.03 * std::cos(2 * t); }

// Sign-change scan of g on [0, 1] refined by bisection.
IntervalUnion scan_line(const std::function<double(double)>& g, int scan) {
  std::vector<Interval> out;
  double prev_x = 0;
  double prev = g(0);
  double open = prev >= 0 ? 0.0 : -1.0;
  bool inside = prev >= 0;
  for (int k = 1; k <= scan; ++k) {
    const double x = static_cast<double>(k) / scan;
    const double v = g(x);
    const bool in = v >= 0;
    if (in != inside) {
      const double root = bisect(g, prev_x, x, 1e-15);
      if (in) {
        open = root;
      } else {
        out.push_back({open, root});
      }
      inside = in;
    }
    prev_x = x;
    prev = v;
  }
  if (inside) out.push_back({open, 1.0});
  return IntervalUnion(std::move(out));
}

IntervalUnion field_section(const ScalarField& f, double t, std::span<const double> fixed,
                            int scan) {
  std::vector<double> p(2 + fixed.size());
  p[0] = t;
  std::copy(fixed.begin(), fixed.end(), p.begin() + 2);
  return scan_line(
      [&](double x) {
        p[1] = x;
        return f(p);
      },
      scan);
}

double section_distance(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.empty() && b.empty()) return 0;
  if (a.empty() || b.empty()) return kInf;
  return hausdorff_1d(a, b);
}

double point_segment(std::span<const double> p, const std::array<double, 2>& a,
                     const std::array<double, 2>& b) {
  const double ux = b[0] - a[0], uy = b[1] - a[1];
  const double len2 = ux * ux + uy * uy;
  double s = len2 > 0 ? ((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / len2 : 0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - s * ux, p[1] - a[1] - s * uy);
}

// Directed distance from points to the zero set of f, bounded by the nearest
// of the other set's sample points.
double directed(const std::vector<std::vector<double>>& from, const ScalarField& f,
                const std::vector<std::vector<double>>& to, int dim) {
  std::vector<double> flat;
  flat.reserve(to.size() * dim);
  for (const auto& q : to) flat.insert(flat.end(), q.begin(), q.end());
  const KdTree tree(dim, flat);
  std::vector<double> dist(from.size());
  parallel_for(from.size(), [&](std::size_t k) {
    const double nearest = std::sqrt(tree.nearest(from[k]).dist2);
    dist[k] = std::min(nearest, distance_to_zero_set(f, from[k]));
  });
  double worst = 0;
  for (double v : dist) worst = std::max(worst, v);
  return worst;
}

}  // namespace

bool Phantom::contains(double t, std::span<const double> x) const { return level_at(t, x) >= 0; }

double Phantom::level_at(double t, std::span<const double> x) const {
  std::vector<double> p(x.size() + 1);
  p[0] = t;
  std::copy(x.begin(), x.end(), p.begin() + 1);
  return level(p);
}

std::vector<std::string> phantom_names(int d) {
  std::vector<std::string> names = {"ball", "ellipsoid", "torus", "two_ball", "dumbbell", "cylinder"};
  if (d == 1) {
    names.push_back("crossing");
    names.push_back("cap");
    names.push_back("two_holes");
  }
  return names;
}

Phantom make_phantom(std::string_view name, int d) {
  if (d < 1 || d > 3) fail(ErrorCode::DimensionUnsupported, "phantoms exist for d = 1, 2, 3");
  const int D = d + 1;
  Phantom ph;
  ph.name = std::string(name);
  ph.d = d;

  if (name == "ball") {
    ph.level = ball_level(centre(D), 0.3);
    ph.exact_distance = true;
    if (d == 1) ph.pcts = {{0.2, 0.5, PctKind::B, 0}, {0.8, 0.5, PctKind::B, 0}};
  } else if (name == "ellipsoid") {
    const std::vector<double> axes = {0.3, 0.22, 0.26, 0.2};
    ph.level = [axes, D](std::span<const double> p) {
      double s = 0;
      for (int a = 0; a < D; ++a) s += (p[a] - 0.5) * (p[a] - 0.5) / (axes[a] * axes[a]);
      return 0.2 * (1 - std::sqrt(s));
    };
    if (d == 1) ph.pcts = {{0.2, 0.5, PctKind::B, 0}, {0.8, 0.5, PctKind::B, 0}};
  } else if (name == "torus" && d == 1) {
    // Annulus in the (t, x_1) plane.
    ph.level = [](std::span<const double> p) {
      return 0.15 - std::abs(std::hypot(p[0] - 0.5, p[1] - 0.5) - 0.25);
    };
    ph.exact_distance = true;
    ph.pcts = {{0.1, 0.5, PctKind::B, 0}, {0.4, 0.5, PctKind::B, 0},
               {0.6, 0.5, PctKind::B, 0}, {0.9, 0.5, PctKind::B, 0}};
  } else if (name == "torus") {
    ph.level = [](std::span<const double> p) {
      const double dt = p[0] - 0.5;
      const double dr = radial(p) - 0.25;
      return 0.15 - std::sqrt(dt * dt + dr * dr);
    };
    ph.exact_distance = true;
  } else if (name == "two_ball") {
    std::vector<double> c1 = centre(D), c2 = centre(D);
    c1[1] = 0.35;
    c2[1] = 0.65;
    const ScalarField b1 = ball_level(c1, 0.2), b2 = ball_level(c2, 0.2);
    ph.level = [b1, b2](std::span<const double> p) { return std::max(b1(p), b2(p)); };
    ph.smoothness = Smoothness::Piecewise;
    if (d == 1) {
      const double w = std::sqrt(0.04 - 0.0225);
      ph.pcts = {{0.3, 0.35, PctKind::B, 0}, {0.3, 0.65, PctKind::B, 0},
                 {0.5 - w, 0.5, PctKind::A, 0}, {0.5 + w, 0.5, PctKind::A, 0},
                 {0.7, 0.35, PctKind::B, 0}, {0.7, 0.65, PctKind::B, 0}};
    }
  } else if (name == "dumbbell") {
    const ScalarField b1 = ball_level(centre(D, 0.3), 0.18), b2 = ball_level(centre(D, 0.7), 0.18);
    ph.level = [b1, b2](std::span<const double> p) {
      const double neck = std::min({0.07 - radial(p), p[0] - 0.3, 0.7 - p[0]});
      return std::max({b1(p), b2(p), neck});
    };
    ph.smoothness = Smoothness::Piecewise;
    if (d == 1) ph.pcts = {{0.12, 0.5, PctKind::B, 0}, {0.88, 0.5, PctKind::B, 0}};
  } else if (name == "cylinder") {
    ph.level = [](std::span<const double> p) { return 0.25 - radial(p); };
    ph.exact_distance = true;
  } else if (d == 1 && name == "crossing") {
    ph.level = [](std::span<const double> p) {
      return hole_level(p[1], 0.05, 0.95, u_cross(p[0]), v_cross(p[0]));
    };
    const double ts = bisect([](double t) { return v_cross(t) - u_cross(t); }, 0.0, 1.0, 1e-15);
    ph.pcts = {{ts, u_cross(ts), PctKind::A, 0}};
  } else if (d == 1 && name == "cap") {
    ph.level = [](std::span<const double> p) {
      const double hole = std::hypot(p[0] - 0.62, p[1] - 0.5) - 0.3;
      return std::min({p[1] - 0.05, 0.95 - p[1], hole});
    };
    ph.pcts = {{0.32, 0.5, PctKind::B, 0}, {0.92, 0.5, PctKind::B, 0}};
  } else if (d == 1 && name == "two_holes") {
    ph.level = [](std::span<const double> p) {
      const double t = p[0], y = p[1];
      const double ellipse =
          0.1 * (std::hypot((t - 0.3) / 0.15, (y - 0.35) / 0.1) - 1);
      const double g =
          t > 0.2 && t < 0.9 ? 0.08 * std::sin(std::numbers::pi * (t - 0.2) / 0.7) : 0.0;
      const double lens = std::abs(y - 0.7) - g;
      return std::min({y - 0.1, 0.9 - y, ellipse, lens});
    };
    ph.pcts = {{0.15, 0.35, PctKind::B, 0}, {0.45, 0.35, PctKind::B, 0},
               {0.2, 0.7, PctKind::A, 0}, {0.9, 0.7, PctKind::A, 0}};
  } else {
    fail(ErrorCode::InvalidArgument,
         "unknown phantom '" + std::string(name) + "' for d = " + std::to_string(d));
  }
  return ph;
}

IntervalUnion phantom_section(const Phantom& ph, double t, std::span<const double> fixed, int scan) {
  if (static_cast<int>(fixed.size()) != ph.d - 1)
    fail(ErrorCode::DimensionMismatch, "section needs d - 1 fixed coordinates");
  return field_section(ph.level, t, fixed, scan);
}

SampledSVF sample_phantom(const Phantom& ph, int N, int n_per_axis) {
  if (N < 2) fail(ErrorCode::InvalidArgument, "need N >= 2");
  if (ph.d == 1) {
    std::vector<IntervalUnion> s(N + 1);
    parallel_for(s.size(), [&](std::size_t i) {
      s[i] = phantom_section(ph, static_cast<double>(i) / N);
    });
    return SampledSVF::from_intervals(std::move(s));
  }
  const int n = n_per_axis > 0 ? n_per_axis : N + 1;
  if (n < 2) fail(ErrorCode::InvalidArgument, "need at least two nodes per axis");
  std::vector<GridSet> s(N + 1);
  parallel_for(s.size(), [&](std::size_t i) {
    const double t = static_cast<double>(i) / N;
    s[i] = GridSet::sample(ph.d, n, [&](std::span<const double> x) { return ph.level_at(t, x); });
  });
  return SampledSVF::from_grids(std::move(s));
}

double distance_to_zero_set(const ScalarField& f, std::span<const double> p) {
  const std::size_t dim = p.size();
  std::vector<double> x(p.begin(), p.end());
  std::vector<double> g(dim);
  std::vector<double> probe(dim);
  const double eps = 1e-7;
  double v = f(x);
  for (int it = 0; it < 60 && std::abs(v) > 1e-14; ++it) {
    double g2 = 0;
    for (std::size_t a = 0; a < dim; ++a) {
      probe = x;
      probe[a] = x[a] + eps;
      const double fp = f(probe);
      probe[a] = x[a] - eps;
      const double fm = f(probe);
      g[a] = (fp - fm) / (2 * eps);
      g2 += g[a] * g[a];
    }
    if (!(g2 > 0)) return kInf;
    double moved = 0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double s = v * g[a] / g2;
      x[a] -= s;
      moved += s * s;
    }
    v = f(x);
    if (moved < 1e-30) break;
  }
  if (!(std::abs(v) <= 1e-10)) return kInf;
  return norm_from(x, p);
}

double zero_set_hausdorff(const ScalarField& a, const ScalarField& b, int dim, int cells) {
  const auto pa = zero_set_points(a, dim, cells);
  const auto pb = zero_set_points(b, dim, cells);
  if (pa.empty() && pb.empty()) return 0;
  if (pa.empty() || pb.empty()) return kInf;
  return std::max(directed(pa, b, pb, dim), directed(pb, a, pa, dim));
}

double contour_hausdorff(const Contour& c, const ScalarField& f, int cells) {
  const auto oracle = zero_set_points(f, 2, cells);
  if (c.empty() && oracle.empty()) return 0;
  if (c.empty() || oracle.empty()) return kInf;

  // Contour vertices and segment midpoints to the zero set.
  std::vector<std::vector<double>> probes;
  for (const auto& v : c.vertices) probes.push_back({v[0], v[1]});
  for (const auto& s : c.segments) {
    const auto& a = c.vertices[s[0]];
    const auto& b = c.vertices[s[1]];
    probes.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
  }
  const double forward = directed(probes, f, oracle, 2);

  // Zero set samples to the polyline.
  std::vector<double> mids;
  double half_max = 0;
  for (const auto& s : c.segments) {
    const auto& a = c.vertices[s[0]];
    const auto& b = c.vertices[s[1]];
    mids.push_back(0.5 * (a[0] + b[0]));
    mids.push_back(0.5 * (a[1] + b[1]));
    half_max = std::max(half_max, 0.5 * std::hypot(b[0] - a[0], b[1] - a[1]));
  }
  const KdTree tree(2, mids);
  std::vector<double> dist(oracle.size());
  parallel_for(oracle.size(), [&](std::size_t k) {
    const auto& q = oracle[k];
    const double dm = std::sqrt(tree.nearest(q).dist2);
    double best = kInf;
    for (std::size_t s : tree.radius(q, dm + half_max)) {
      const auto& seg = c.segments[s];
      best = std::min(best, point_segment(q, c.vertices[seg[0]], c.vertices[seg[1]]));
    }
    dist[k] = best;
  });
  double backward = 0;
  for (double v : dist) backward = std::max(backward, v);
  return std::max(forward, backward);
}

ErrorReport measure_error(const Phantom& ph, const ScalarField& approx, std::span<const double> ts,
                          int cells) {
  ErrorReport r;
  for (double t : ts) {
    double e = 0;
    if (ph.d == 1) {
      e = section_distance(field_section(approx, t, {}, 4096), phantom_section(ph, t));
    } else {
      const int c = cells > 0 ? cells : (ph.d == 2 ? 400 : 96);
      const ScalarField a = [&](std::span<const double> x) {
        std::vector<double> p(x.size() + 1);
        p[0] = t;
        std::copy(x.begin(), x.end(), p.begin() + 1);
        return approx(p);
      };
      const ScalarField b = [&](std::span<const double> x) { return ph.level_at(t, x); };
      e = zero_set_hausdorff(a, b, ph.d, c);
    }
    r.t.push_back(t);
    r.error.push_back(e);
    r.sup = std::max(r.sup, e);
  }
  return r;
}

ErrorReport measure_error(const Phantom& ph, const SVF1DApproximant& approx,
                          std::span<const double> ts) {
  if (ph.d != 1) fail(ErrorCode::DimensionMismatch, "svf1d error needs a d = 1 phantom");
  ErrorReport r;
  for (double t : ts) {
    const double e = section_distance(evaluate(approx, t), phantom_section(ph, t));
    r.t.push_back(t);
    r.error.push_back(e);
    r.sup = std::max(r.sup, e);
  }
  for (const PCT& truth : ph.pcts) {
    double best = kInf;
    for (const auto& rec : approx.pcts()) {
      if (!rec.reliable || rec.pct.kind != truth.kind) continue;
      best = std::min(best, std::max(std::abs(rec.pct.t_star - truth.t_star),
                                     std::abs(rec.pct.y_star - truth.y_star)));
    }
    r.pct_errors.push_back(best);
  }
  return r;
}

double convergence_slope(std::span<const int> Ns, std::span<const double> err) {
  if (Ns.size() != err.size() || Ns.size() < 2)
    fail(ErrorCode::InvalidArgument, "slope needs matching lists of at least two entries");
  const double n = static_cast<double>(Ns.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    mx += std::log2(Ns[k]);
    my += -std::log2(err[k]);
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    const double x = std::log2(Ns[k]) - mx;
    num += x * (-std::log2(err[k]) - my);
    den += x * x;
  }
  return num / den;
}

}  // namespace svf

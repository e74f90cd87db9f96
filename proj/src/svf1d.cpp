// SPDX-License-Identifier: Apache-2.0
#include "svf/svf1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "svf/error.hpp"
#include "svf/roots.hpp"

namespace svf {

namespace {

struct TrackEvent {
  int strip = 0;
  bool birth = true;
  int lower_curve = -1;
  int upper_curve = -1;
};

struct Tracking {
  std::vector<BoundaryCurve> curves;
  std::vector<TrackEvent> events;
};

double max_index_displacement(const std::vector<Endpoint>& a, const std::vector<Endpoint>& b) {
  double worst = 0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j].y - b[j].y));
  return worst;
}

// Alignment of consecutive endpoint lists: matched endpoints share their
// side; unmatched ones come in adjacent pairs (births in b, deaths in a).
// Fewest events first, then the smallest largest displacement.
struct Alignment {
  std::vector<int> a_to_b;         // -1 for endpoints that die
  std::vector<int> births;         // first index in b of each born pair
  std::vector<int> deaths;         // first index in a of each dying pair
  double cost = 0;
};

std::optional<Alignment> align_endpoints(const std::vector<Endpoint>& a, const std::vector<Endpoint>& b) {
  const std::size_t na = a.size(), nb = b.size();
  struct Cell {
    int events = std::numeric_limits<int>::max();
    double cost = std::numeric_limits<double>::infinity();
    int move = -1;  // 0 match, 1 birth, 2 death
  };
  auto better = [](int e, double c, const Cell& x) { return e < x.events || (e == x.events && c < x.cost); };
  std::vector<Cell> dp((na + 1) * (nb + 1));
  auto at = [&](std::size_t i, std::size_t j) -> Cell& { return dp[i * (nb + 1) + j]; };
  at(na, nb) = {0, 0.0, -1};
  for (std::size_t i = na + 1; i-- > 0;)
    for (std::size_t j = nb + 1; j-- > 0;) {
      if (i == na && j == nb) continue;
      Cell& c = at(i, j);
      if (i < na && j < nb && a[i].lower == b[j].lower) {
        const Cell& n = at(i + 1, j + 1);
        if (n.move >= 0 || (i + 1 == na && j + 1 == nb)) {
          const double cost = std::max(n.cost, std::abs(a[i].y - b[j].y));
          if (better(n.events, cost, c)) c = {n.events, cost, 0};
        }
      }
      if (j + 1 < nb && b[j].lower != b[j + 1].lower) {
        const Cell& n = at(i, j + 2);
        if ((n.move >= 0 || (i == na && j + 2 == nb)) && better(n.events + 1, n.cost, c))
          c = {n.events + 1, n.cost, 1};
      }
      if (i + 1 < na && a[i].lower != a[i + 1].lower) {
        const Cell& n = at(i + 2, j);
        if ((n.move >= 0 || (i + 2 == na && j == nb)) && better(n.events + 1, n.cost, c))
          c = {n.events + 1, n.cost, 2};
      }
    }
  if (na + nb > 0 && at(0, 0).move < 0) return std::nullopt;
  Alignment out;
  out.a_to_b.assign(na, -1);
  out.cost = at(0, 0).cost;
  std::size_t i = 0, j = 0;
  while (i < na || j < nb) {
    switch (at(i, j).move) {
      case 0: out.a_to_b[i++] = static_cast<int>(j++); break;
      case 1: out.births.push_back(static_cast<int>(j)); j += 2; break;
      default: out.deaths.push_back(static_cast<int>(i)); i += 2; break;
    }
  }
  return out;
}

Tracking track_endpoints(const SampledSVF& svf) {
  if (svf.kind() != SampleKind::Intervals) fail(ErrorCode::DimensionMismatch, "1D algorithm needs interval samples");
  const auto ends = detect_boundary_points(svf);
  const int N = svf.N();

  // Largest endpoint step over strips without a topology change.
  double step = 0;
  for (int i = 0; i < N; ++i)
    if (ends[i].size() == ends[i + 1].size()) step = std::max(step, max_index_displacement(ends[i], ends[i + 1]));
  const double threshold = 3 * step;

  Tracking tr;
  auto new_curve = [&](int i, const Endpoint& e) {
    BoundaryCurve c;
    c.first_sample = i;
    c.lower = e.lower;
    c.samples.push_back({svf.t(i), e.y});
    tr.curves.push_back(std::move(c));
    return static_cast<int>(tr.curves.size()) - 1;
  };

  std::vector<int> active;
  for (const auto& e : ends[0]) active.push_back(new_curve(0, e));

  for (int i = 0; i < N; ++i) {
    const auto& a = ends[i];
    const auto& b = ends[i + 1];
    std::vector<int> next(b.size(), -1);
    const double t_next = svf.t(i + 1);
    const auto al = align_endpoints(a, b);
    if (!al) fail(ErrorCode::AmbiguousPairing, "no consistent endpoint matching in strip " + std::to_string(i));
    const bool changed = !al->births.empty() || !al->deaths.empty();
    if (changed && step > 0 && al->cost > threshold + 1e-12)
      fail(ErrorCode::AmbiguousPairing, "no consistent endpoint matching in strip " + std::to_string(i));
    for (std::size_t idx = 0; idx < a.size(); ++idx)
      if (al->a_to_b[idx] >= 0) next[al->a_to_b[idx]] = active[idx];
    for (int j : al->deaths) tr.events.push_back({i, false, active[j], active[j + 1]});
    for (int j : al->births) {
      next[j] = new_curve(i + 1, b[j]);
      next[j + 1] = new_curve(i + 1, b[j + 1]);
      tr.events.push_back({i, true, next[j], next[j + 1]});
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      auto& c = tr.curves[next[j]];
      if (c.last_sample() < i + 1) c.samples.push_back({t_next, b[j].y});
    }
    active = std::move(next);
  }
  return tr;
}

MergingPair pair_from_event(const Tracking& tr, const TrackEvent& ev) {
  MergingPair p;
  p.strip = ev.strip;
  p.gap_right = ev.birth;
  p.lower = tr.curves[ev.lower_curve].samples;
  p.upper = tr.curves[ev.upper_curve].samples;
  if (!ev.birth) {
    std::reverse(p.lower.begin(), p.lower.end());
    std::reverse(p.upper.begin(), p.upper.end());
  }
  return p;
}

const TrackEvent& event_at(const Tracking& tr, int strip) {
  for (const auto& ev : tr.events)
    if (ev.strip == strip) return ev;
  fail(ErrorCode::InvalidArgument, "no topology change in strip " + std::to_string(strip));
}

std::vector<TimedValue> nearest(const std::vector<TimedValue>& pts, std::size_t count) {
  return {pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(std::min(count, pts.size()))};
}

}  // namespace

std::vector<std::vector<Endpoint>> detect_boundary_points(const SampledSVF& svf) {
  if (svf.kind() != SampleKind::Intervals) fail(ErrorCode::DimensionMismatch, "1D algorithm needs interval samples");
  std::vector<std::vector<Endpoint>> out;
  for (const auto& u : svf.intervals()) {
    std::vector<Endpoint> e;
    for (const auto& iv : u.intervals()) {
      e.push_back({iv.lo, true});
      e.push_back({iv.hi, false});
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<int> detect_topology_strips(const SampledSVF& svf) {
  std::vector<int> strips;
  for (const auto& ev : track_endpoints(svf).events) strips.push_back(ev.strip);
  return strips;
}

MergingPair merging_pair(const SampledSVF& svf, int strip) {
  const auto tr = track_endpoints(svf);
  return pair_from_event(tr, event_at(tr, strip));
}

PctKind classify_pair(const MergingPair& pair, double theta) {
  if (pair.lower.size() < 3 || pair.upper.size() < 3)
    fail(ErrorCode::InsufficientSamples, "fewer than 3 samples beside strip " + std::to_string(pair.strip));
  double w[3];
  for (int j = 0; j < 3; ++j) w[j] = pair.upper[j].y - pair.lower[j].y;
  const double near = std::abs(w[1] - w[0]);
  const double far = std::abs(w[2] - w[1]);
  const double ratio = far > 0 ? near / far : (near > 0 ? std::numeric_limits<double>::infinity() : 1.0);
  return ratio >= std::pow(2.0, 0.5 - theta) ? PctKind::B : PctKind::A;
}

PctKind classify_pct(const SampledSVF& svf, int strip, double theta) {
  return classify_pair(merging_pair(svf, strip), theta);
}

double LocalPoly::operator()(double x) const {
  const double s = (x - center) / scale;
  double v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

double LocalPoly::derivative(double x) const {
  const double s = (x - center) / scale;
  double v = 0;
  for (std::size_t j = c.size(); j-- > 1;) v = v * s + j * c[j];
  return v / scale;
}

double LocalPoly::second_derivative(double x) const {
  const double s = (x - center) / scale;
  double v = 0;
  for (std::size_t j = c.size(); j-- > 2;) v = v * s + j * (j - 1) * c[j];
  return v / (scale * scale);
}

LocalPoly fit_poly(const std::vector<TimedValue>& pts, int degree) {
  if (static_cast<int>(pts.size()) < degree + 1)
    fail(ErrorCode::InsufficientSamples, "need " + std::to_string(degree + 1) + " points for the local fit");
  LocalPoly p;
  double lo = pts.front().t, hi = pts.front().t;
  for (const auto& q : pts) {
    lo = std::min(lo, q.t);
    hi = std::max(hi, q.t);
  }
  p.center = 0.5 * (lo + hi);
  p.scale = hi > lo ? 0.5 * (hi - lo) : 1.0;
  Eigen::MatrixXd A(pts.size(), degree + 1);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = (pts[i].t - p.center) / p.scale;
    double v = 1;
    for (int j = 0; j <= degree; ++j) {
      A(i, j) = v;
      v *= s;
    }
    b(i) = pts[i].y;
  }
  const auto qr = A.colPivHouseholderQr();
  if (qr.rank() < degree + 1) fail(ErrorCode::InsufficientSamples, "local fit is rank deficient");
  const Eigen::VectorXd x = qr.solve(b);
  p.c.assign(x.data(), x.data() + x.size());
  return p;
}

CaseAModel locate_case_a(const MergingPair& pair, int q, double h) {
  if (static_cast<int>(pair.lower.size()) < q + 1 || static_cast<int>(pair.upper.size()) < q + 1)
    fail(ErrorCode::InsufficientSamples, "Case A needs " + std::to_string(q + 1) + " samples per curve");
  CaseAModel m;
  m.lower = fit_poly(nearest(pair.lower, q + 2), q);
  m.upper = fit_poly(nearest(pair.upper, q + 2), q);
  const double strip_lo = pair.strip * h;
  const double strip_hi = strip_lo + h;
  auto diff = [&](double t) { return std::pair{m.upper(t) - m.lower(t), m.upper.derivative(t) - m.lower.derivative(t)}; };

  // Walk from the data side across the widened strip to the first sign change.
  const int steps = 48;
  const double from = pair.gap_right ? strip_hi + h : strip_lo - h;
  const double to = pair.gap_right ? strip_lo - h : strip_hi + h;
  double prev_t = from;
  double prev_v = diff(from).first;
  std::optional<double> root;
  for (int s = 1; s <= steps && !root; ++s) {
    const double t = from + (to - from) * s / steps;
    const double v = diff(t).first;
    if (prev_v == 0) {
      root = prev_t;
    } else if ((v <= 0) != (prev_v <= 0)) {
      root = bisect_newton(diff, prev_t, t, kRootTolerance);
    }
    prev_t = t;
    prev_v = v;
  }
  if (!root) fail(ErrorCode::NoIntersection, "local polynomials do not meet near strip " + std::to_string(pair.strip));
  const double t_star = std::clamp(*root, strip_lo, strip_hi);
  m.pct = {t_star, 0.5 * (m.lower(t_star) + m.upper(t_star)), PctKind::A, pair.strip};
  return m;
}

CaseBModel locate_case_b(const MergingPair& pair, int k, double h) {
  if (static_cast<int>(pair.lower.size()) < k || static_cast<int>(pair.upper.size()) < k)
    fail(ErrorCode::InsufficientSamples, "Case B needs " + std::to_string(2 * k) + " samples of the merging pair");
  CaseBModel m;
  // Rotated data: y is the abscissa, t the value.
  std::vector<TimedValue> rotated;
  m.y_min = std::numeric_limits<double>::infinity();
  m.y_max = -m.y_min;
  m.t_far = pair.lower.front().t;
  for (int j = 0; j < k; ++j) {
    for (const auto* side : {&pair.lower, &pair.upper}) {
      const auto& p = (*side)[j];
      rotated.push_back({p.y, p.t});
      m.y_min = std::min(m.y_min, p.y);
      m.y_max = std::max(m.y_max, p.y);
      m.t_far = pair.gap_right ? std::max(m.t_far, p.t) : std::min(m.t_far, p.t);
    }
  }
  // Away from a resolved fold the lower curve falls and the upper one rises.
  for (int j = 0; j < k; ++j) {
    const bool ordered = pair.lower[j].y < pair.upper[j].y &&
                         (j == 0 || (pair.lower[j].y < pair.lower[j - 1].y &&
                                     pair.upper[j].y > pair.upper[j - 1].y));
    if (!ordered)
      fail(ErrorCode::InsufficientSamples,
           "samples near strip " + std::to_string(pair.strip) + " do not resolve a fold");
  }
  m.t_of_y = fit_poly(rotated, 2 * k - 1);

  // Extremum of t = p(y) facing the strip: a minimum when the pair lies to the
  // right of it, a maximum otherwise.
  const auto& p = m.t_of_y;
  auto dp = [&](double y) { return std::pair{p.derivative(y), p.second_derivative(y)}; };
  std::optional<double> best;
  int extrema = 0;
  const int steps = 400;
  double prev_y = m.y_min;
  double prev_v = p.derivative(prev_y);
  auto consider = [&](double y) {
    ++extrema;
    const double curvature = p.second_derivative(y);
    if (pair.gap_right ? curvature <= 0 : curvature >= 0) return;
    if (!best || (pair.gap_right ? p(y) < p(*best) : p(y) > p(*best))) best = y;
  };
  for (int s = 1; s <= steps; ++s) {
    const double y = m.y_min + (m.y_max - m.y_min) * s / steps;
    const double v = p.derivative(y);
    if (v == 0 && prev_v == 0) {
      // flat piece: no isolated extremum
    } else if (v == 0) {
      consider(y);
    } else if (prev_v != 0 && (v < 0) != (prev_v < 0)) {
      consider(bisect_newton(dp, prev_y, y, kRootTolerance));
    }
    prev_y = y;
    prev_v = v;
  }
  if (!best) fail(ErrorCode::NoExtremum, "rotated polynomial has no extremum near strip " + std::to_string(pair.strip));
  if (extrema > 1)
    fail(ErrorCode::InsufficientSamples, "rotated polynomial oscillates near strip " + std::to_string(pair.strip));
  const double strip_lo = pair.strip * h;
  if (p(*best) < strip_lo - h || p(*best) > strip_lo + 2 * h)
    fail(ErrorCode::InsufficientSamples, "fold estimate leaves strip " + std::to_string(pair.strip));
  const double t_star = std::clamp(p(*best), strip_lo, strip_lo + h);
  m.pct = {t_star, *best, PctKind::B, pair.strip};
  return m;
}

PCT approx_pct_case_a(const SampledSVF& svf, int strip, int q) {
  return locate_case_a(merging_pair(svf, strip), q, svf.h()).pct;
}

PCT approx_pct_case_b(const SampledSVF& svf, int strip, int k) {
  return locate_case_b(merging_pair(svf, strip), k, svf.h()).pct;
}

TrackSpline::TrackSpline(const std::vector<TimedValue>& pts, int degree) : degree_(degree) {
  if (degree != 1 && degree != 3)
    fail(ErrorCode::UnsupportedDegree, "boundary splines support degree 1 or 3, got " + std::to_string(degree));
  for (const auto& p : pts) {
    t_.push_back(p.t);
    y_.push_back(p.y);
  }
  const int n = static_cast<int>(t_.size());
  m_.assign(n, 0.0);
  if (degree == 1 || n < 3) return;
  if (n == 3) {
    // Single parabola: constant second derivative.
    const double d0 = (y_[1] - y_[0]) / (t_[1] - t_[0]);
    const double d1 = (y_[2] - y_[1]) / (t_[2] - t_[1]);
    std::fill(m_.begin(), m_.end(), 2 * (d1 - d0) / (t_[2] - t_[0]));
    return;
  }
  // Not-a-knot: M_0 and M_{n-1} are eliminated, leaving a tridiagonal system
  // for M_1..M_{n-2}.
  std::vector<double> hs(n - 1), delta(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    hs[i] = t_[i + 1] - t_[i];
    delta[i] = (y_[i + 1] - y_[i]) / hs[i];
  }
  const int u = n - 2;
  std::vector<double> lo(u, 0), di(u, 0), up(u, 0), rhs(u, 0);
  for (int r = 0; r < u; ++r) {
    const int i = r + 1;
    lo[r] = hs[i - 1];
    di[r] = 2 * (hs[i - 1] + hs[i]);
    up[r] = hs[i];
    rhs[r] = 6 * (delta[i] - delta[i - 1]);
  }
  // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
  di[0] += hs[0] * (hs[0] + hs[1]) / hs[1];
  up[0] -= hs[0] * hs[0] / hs[1];
  // M_{n-1} = ((h_{n-2} + h_{n-3}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
  const double ha = hs[n - 2], hb = hs[n - 3];
  di[u - 1] += ha * (ha + hb) / hb;
  lo[u - 1] -= ha * ha / hb;
  // Thomas algorithm.
  for (int r = 1; r < u; ++r) {
    const double f = lo[r] / di[r - 1];
    di[r] -= f * up[r - 1];
    rhs[r] -= f * rhs[r - 1];
  }
  std::vector<double> M(u);
  M[u - 1] = rhs[u - 1] / di[u - 1];
  for (int r = u - 2; r >= 0; --r) M[r] = (rhs[r] - up[r] * M[r + 1]) / di[r];
  for (int r = 0; r < u; ++r) m_[r + 1] = M[r];
  m_[0] = ((hs[0] + hs[1]) * m_[1] - hs[0] * m_[2]) / hs[1];
  m_[n - 1] = ((ha + hb) * m_[n - 2] - ha * m_[n - 3]) / hb;
}

int TrackSpline::locate(double t) const {
  const int n = static_cast<int>(t_.size());
  if (n < 2) return 0;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const int j = static_cast<int>(it - t_.begin()) - 1;
  return std::clamp(j, 0, n - 2);
}

double TrackSpline::operator()(double t) const {
  if (t_.empty()) fail(ErrorCode::InsufficientSamples, "empty spline");
  if (t_.size() == 1) return y_[0];
  const int j = locate(t);
  const double h = t_[j + 1] - t_[j];
  const double a = (t_[j + 1] - t) / h;
  const double b = (t - t_[j]) / h;
  return a * y_[j] + b * y_[j + 1] + ((a * a * a - a) * m_[j] + (b * b * b - b) * m_[j + 1]) * h * h / 6;
}

double TrackSpline::derivative(double t) const {
  if (t_.size() < 2) return 0;
  const int j = locate(t);
  const double h = t_[j + 1] - t_[j];
  const double a = (t_[j + 1] - t) / h;
  const double b = (t - t_[j]) / h;
  return (y_[j + 1] - y_[j]) / h + (-(3 * a * a - 1) * m_[j] + (3 * b * b - 1) * m_[j + 1]) * h / 6;
}

Svf1dDiagnostics SVF1DApproximant::diagnostics() const {
  Svf1dDiagnostics d;
  for (const auto& c : curves_) (c.reliable ? d.reliable_curves : d.unreliable_curves)++;
  for (const auto& p : pcts_) d.failed_pcts += !p.failure.empty();
  return d;
}

std::pair<double, double> SVF1DApproximant::curve_span(int curve) const {
  const auto& c = curves_[curve];
  const double lo = c.start == CurveEnd::DomainEdge ? c.samples.front().t : pcts_[c.start_pct].pct.t_star;
  const double hi = c.end == CurveEnd::DomainEdge ? c.samples.back().t : pcts_[c.end_pct].pct.t_star;
  return {lo, hi};
}

namespace {

// Value of a curve from the local model of PCT r, if t falls in its region.
std::optional<double> model_value(const SVF1DApproximant& ap, const BoundaryCurve& c, const PctRecord& r,
                                  bool at_start, double t, double h) {
  const double t_star = r.pct.t_star;
  const TimedValue near = at_start ? c.samples.front() : c.samples.back();
  const bool lower = &c == &ap.curves()[r.lower_curve];
  if (r.case_a) {
    const bool between = at_start ? (t >= t_star && t < near.t) : (t <= t_star && t > near.t);
    if (!between) return std::nullopt;
    const auto& poly = lower ? r.case_a->lower : r.case_a->upper;
    if (near.t == t_star) return near.y;
    const double w = (t - t_star) / (near.t - t_star);
    return poly(t) + w * (near.y - poly(near.t)) + (1 - w) * (r.pct.y_star - poly(t_star));
  }
  if (r.case_b) {
    const auto& m = *r.case_b;
    const double reach = at_start ? std::min(t_star + 2 * h, m.t_far) : std::max(t_star - 2 * h, m.t_far);
    const bool inside = at_start ? (t >= t_star && t <= reach) : (t <= t_star && t >= reach);
    if (!inside) return std::nullopt;
    const double y_star = r.pct.y_star;
    const double a = lower ? m.y_min : y_star;
    const double b = lower ? y_star : m.y_max;
    auto g = [&](double y) { return std::pair{m.t_of_y(y) - t, m.t_of_y.derivative(y)}; };
    const double ga = g(a).first, gb = g(b).first;
    if (ga == 0) return a;
    if (gb == 0) return b;
    if ((ga < 0) == (gb < 0)) {
      if (t == t_star) return y_star;
      return std::nullopt;
    }
    return bisect_newton(g, a, b, kRootTolerance);
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> SVF1DApproximant::curve_value(int curve, double t) const {
  const auto& c = curves_[curve];
  if (!c.reliable) return std::nullopt;
  const auto [lo, hi] = curve_span(curve);
  if (t < lo - 1e-14 || t > hi + 1e-14) return std::nullopt;
  const double h = source_.h();
  if (c.start != CurveEnd::DomainEdge)
    if (auto v = model_value(*this, c, pcts_[c.start_pct], true, std::max(t, lo), h)) return v;
  if (c.end != CurveEnd::DomainEdge)
    if (auto v = model_value(*this, c, pcts_[c.end_pct], false, std::min(t, hi), h)) return v;
  return c.spline(t);
}

std::optional<double> SVF1DApproximant::curve_slope(int curve, double t) const {
  const auto& c = curves_[curve];
  if (!c.reliable) return std::nullopt;
  const auto [lo, hi] = curve_span(curve);
  if (t < lo || t > hi) return std::nullopt;
  const double h = source_.h();
  for (bool at_start : {true, false}) {
    const CurveEnd end = at_start ? c.start : c.end;
    if (end == CurveEnd::DomainEdge) continue;
    const auto& r = pcts_[at_start ? c.start_pct : c.end_pct];
    const auto y = model_value(*this, c, r, at_start, t, h);
    if (!y) continue;
    if (r.case_b) {
      const double dt_dy = r.case_b->t_of_y.derivative(*y);
      if (std::abs(dt_dy) < 1e-12) return std::nullopt;
      return 1.0 / dt_dy;
    }
    // Case A: differentiate the corrected polynomial numerically.
    const double e = 1e-6 * h;
    const auto y1 = model_value(*this, c, r, at_start, t + e, h);
    const auto y0 = model_value(*this, c, r, at_start, t - e, h);
    if (y1 && y0) return (*y1 - *y0) / (2 * e);
    const bool lower = curve == r.lower_curve;
    return (lower ? r.case_a->lower : r.case_a->upper).derivative(t);
  }
  return c.spline.derivative(t);
}

IntervalUnion SVF1DApproximant::evaluate_curves(double t) const {
  std::vector<double> ys;
  for (int c = 0; c < static_cast<int>(curves_.size()); ++c)
    if (auto y = curve_value(c, t)) ys.push_back(std::clamp(*y, 0.0, 1.0));
  if (ys.size() % 2 != 0)
    fail(ErrorCode::InconsistentParity, "odd number of boundary crossings at t = " + std::to_string(t));
  std::sort(ys.begin(), ys.end());
  std::vector<Interval> ivs;
  for (std::size_t j = 0; j < ys.size(); j += 2) ivs.push_back({ys[j], ys[j + 1]});
  return IntervalUnion(std::move(ivs));
}

SVF1DApproximant build_approximant(const SampledSVF& svf, const Svf1dConfig& cfg) {
  return SVF1DApproximant::build(svf, cfg, true);
}

SVF1DApproximant SVF1DApproximant::build(const SampledSVF& svf, const Svf1dConfig& cfg, bool with_complement) {
  if (cfg.p_spline != 1 && cfg.p_spline != 3)
    fail(ErrorCode::UnsupportedDegree, "p_spline must be 1 or 3");
  if (cfg.q < 1 || cfg.k < 1) fail(ErrorCode::UnsupportedDegree, "local degrees must be positive");
  auto tr = track_endpoints(svf);
  SVF1DApproximant ap;
  ap.source_ = svf;
  ap.config_ = cfg;
  const double h = svf.h();

  for (const auto& ev : tr.events) {
    PctRecord rec;
    rec.lower_curve = ev.lower_curve;
    rec.upper_curve = ev.upper_curve;
    rec.gap_right = ev.birth;
    rec.pct.strip = ev.strip;
    rec.pct.t_star = (ev.strip + 0.5) * h;
    try {
      const MergingPair pair = pair_from_event(tr, ev);
      if (classify_pair(pair, cfg.theta) == PctKind::A) {
        rec.case_a = locate_case_a(pair, cfg.q, h);
        rec.pct = rec.case_a->pct;
      } else {
        rec.case_b = locate_case_b(pair, cfg.k, h);
        rec.pct = rec.case_b->pct;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AmbiguousPairing) throw;
      rec.reliable = false;
      rec.failure = to_string(e.code());
    }
    const int idx = static_cast<int>(ap.pcts_.size());
    const CurveEnd mark = rec.pct.kind == PctKind::A ? CurveEnd::PctA : CurveEnd::PctB;
    for (int c : {ev.lower_curve, ev.upper_curve}) {
      auto& curve = tr.curves[c];
      if (ev.birth) {
        curve.start = mark;
        curve.start_pct = idx;
      } else {
        curve.end = mark;
        curve.end_pct = idx;
      }
    }
    ap.pcts_.push_back(std::move(rec));
  }
  ap.curves_ = std::move(tr.curves);

  // A failed local model invalidates both of its curves, and through shared
  // curves every PCT and curve of the same connected piece of boundary.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& r : ap.pcts_) {
      const bool bad = !r.reliable || !ap.curves_[r.lower_curve].reliable || !ap.curves_[r.upper_curve].reliable;
      if (!bad) continue;
      for (int c : {r.lower_curve, r.upper_curve}) {
        if (ap.curves_[c].reliable) changed = true;
        ap.curves_[c].reliable = false;
      }
      r.reliable = false;
    }
  }
  for (auto& c : ap.curves_) c.spline = TrackSpline(c.samples, cfg.p_spline);

  const bool any_unreliable =
      std::any_of(ap.curves_.begin(), ap.curves_.end(), [](const BoundaryCurve& c) { return !c.reliable; });
  if (any_unreliable && with_complement) {
    try {
      auto comp = build(complement(svf), cfg, false);
      ap.complement_ = std::make_shared<const SVF1DApproximant>(std::move(comp));
    } catch (const Error&) {
    }
  }
  return ap;
}

IntervalUnion evaluate(const SVF1DApproximant& approx, double t) {
  if (!(t >= 0 && t <= 1)) fail(ErrorCode::OutOfDomain, "t outside [0,1]");
  const auto& svf = approx.source();
  const int N = svf.N();
  const int i = static_cast<int>(std::lround(t * N));
  if (std::abs(t - svf.t(i)) <= 1e-12) return svf.interval(i);
  try {
    return approx.evaluate_curves(t);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InconsistentParity || !approx.complement_) throw;
    return complement_in_unit(approx.complement_->evaluate_curves(t));
  }
}

SampledSVF complement(const SampledSVF& svf) {
  std::vector<IntervalUnion> out;
  for (const auto& u : svf.intervals()) out.push_back(complement_in_unit(u));
  return SampledSVF::from_intervals(std::move(out));
}

}  // namespace svf

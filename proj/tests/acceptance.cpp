// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit status
// is non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "svf/convergence.hpp"
#include "svf/distance.hpp"
#include "svf/error.hpp"
#include "svf/io.hpp"
#include "svf/kdtree.hpp"
#include "svf/metric_average.hpp"
#include "svf/phantoms.hpp"
#include "svf/quasi_spline.hpp"
#include "svf/reconstruct.hpp"
#include "svf/svf1d.hpp"

using namespace svf;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3g", x);
  return s;
}

double slope_vs_N(const std::vector<int>& Ns, const std::vector<double>& err) { return convergence_slope(Ns, err); }

// 1. Polynomial reproduction of the univariate quasi-interpolant.
Outcome qi_exactness() {
  const int N = 16;
  double worst = 0;
  for (int p = 2; p <= 5; ++p) {
    const QIOperator op = QIOperator::make(p, 1.0 / N);
    for (int k = 0; k <= p; ++k) {
      std::vector<double> s(N + 1);
      for (int i = 0; i <= N; ++i) s[i] = std::pow(static_cast<double>(i) / N, k);
      for (int j = 0; j <= 1000; ++j) {
        const double x = j / 1000.0;
        worst = std::max(worst, std::abs(qi_apply_1d(op, s, x) - std::pow(x, k)));
      }
    }
  }
  return {worst <= 1e-10, fmt("max error %.2e over p = 2..5, degrees <= p", worst)};
}

// 2. Order of the cubic quasi-interpolant on sin(2 pi x).
Outcome qi_order() {
  const std::vector<int> Ns = {16, 32, 64};
  std::vector<double> errs;
  for (int N : Ns) {
    const QIOperator op = QIOperator::make(3, 1.0 / N);
    std::vector<double> s(N + 1);
    for (int i = 0; i <= N; ++i) s[i] = std::sin(2 * kPi * i / N);
    double e = 0;
    for (int j = 0; j <= 4000; ++j) {
      const double x = j / 4000.0;
      e = std::max(e, std::abs(qi_apply_1d(op, s, x) - std::sin(2 * kPi * x)));
    }
    errs.push_back(e);
  }
  const double sl = slope_vs_N(Ns, errs);
  return {sl >= 3.5, fmt("errors %s, slope %.2f", list(errs).c_str(), sl)};
}

// Radial distance from the circle of radius 0.3 to the zero level of s along
// 2000 rays; infinity when a ray does not cross exactly once.
double circle_level_error(const TensorSpline& s) {
  double worst = 0;
  for (int k = 0; k < 2000; ++k) {
    const double th = 2 * kPi * (k + 0.37) / 2000;
    auto at = [&](double r) {
      const double x[2] = {0.5 + r * std::cos(th), 0.5 + r * std::sin(th)};
      return s(x);
    };
    int changes = 0;
    for (int j = 0; j < 200; ++j)
      if ((at(0.2 + j * 0.001) >= 0) != (at(0.2 + (j + 1) * 0.001) >= 0)) ++changes;
    if (changes != 1) return std::numeric_limits<double>::infinity();
    double lo = 0.2, hi = 0.4;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((at(mid) >= 0) == (at(lo) >= 0) ? lo : hi) = mid;
    }
    worst = std::max(worst, std::abs(0.5 * (lo + hi) - 0.3));
  }
  return worst;
}

// 3. Zero level of the bicubic quasi-interpolant of a circle's signed distance,
// with and without an injected perturbation of size delta^4.
Outcome circle_level_order() {
  const std::vector<int> Ns = {16, 32, 64};
  std::vector<double> clean, noisy;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int N : Ns) {
    std::vector<double> v((N + 1) * (N + 1)), w(v.size());
    for (int a = 0; a <= N; ++a)
      for (int b = 0; b <= N; ++b) {
        const double d = 0.3 - std::hypot(static_cast<double>(a) / N - 0.5, static_cast<double>(b) / N - 0.5);
        v[a * (N + 1) + b] = d;
        w[a * (N + 1) + b] = d + std::pow(1.0 / N, 4) * u(rng);
      }
    clean.push_back(circle_level_error(TensorSpline::build(3, 2, N, v)));
    noisy.push_back(circle_level_error(TensorSpline::build(3, 2, N, w)));
  }
  const double sl = slope_vs_N(Ns, clean);
  bool bounded = true;
  for (std::size_t k = 0; k < Ns.size(); ++k) bounded &= noisy[k] <= 3 * clean[k];
  return {sl >= 3.5 && bounded,
          fmt("errors %s, slope %.2f; perturbed %s (limit 3x)", list(clean).c_str(), sl, list(noisy).c_str())};
}

// 4 and 5. PCT location order on a d = 1 phantom.
Outcome pct_order(const char* name, const std::vector<int>& Ns, const Svf1dConfig& cfg, double need) {
  const Phantom ph = make_phantom(name, 1);
  std::vector<double> errs;
  const double ts[1] = {0.5};
  for (int N : Ns) {
    const auto ap = build_approximant(sample_phantom(ph, N), cfg);
    const auto r = measure_error(ph, ap, ts);
    double e = 0;
    for (double x : r.pct_errors) e = std::max(e, x);
    errs.push_back(e);
  }
  const double sl = slope_vs_N(Ns, errs);
  return {sl >= need, fmt("PCT errors %s, slope %.2f (need %.1f)", list(errs).c_str(), sl, need)};
}

// 6. Reconstructions reproduce every sample.
Outcome interpolation_property() {
  double worst1 = 0;
  for (const auto& name : phantom_names(1)) {
    const Phantom ph = make_phantom(name, 1);
    const auto svf = sample_phantom(ph, 32);
    const auto ap = build_approximant(svf);
    for (int i = 0; i <= svf.N(); ++i) {
      const auto got = evaluate(ap, svf.t(i));
      const auto& want = svf.interval(i);
      if (got.empty() != want.empty()) return {false, name + " d=1: emptiness differs at t_" + std::to_string(i)};
      if (!got.empty()) worst1 = std::max(worst1, hausdorff_1d(got, want));
    }
  }
  double worst2 = 0;  // in raster cells
  for (const auto& name : phantom_names(2)) {
    const Phantom ph = make_phantom(name, 2);
    const int N = 16, n = 2 * N + 1;
    const auto svf = sample_phantom(ph, N, n);
    const TwoStage st(svf);
    for (int i = 0; i <= N; ++i) {
      const PointCloud got = in_set_nodes(st.evaluate(svf.t(i)).raster(n), n);
      const PointCloud want = in_set_nodes(svf.grid(i), n);
      if (got.empty() != want.empty()) return {false, name + " d=2: emptiness differs at t_" + std::to_string(i)};
      if (!got.empty()) worst2 = std::max(worst2, hausdorff_points(got, want) * (n - 1));
    }
  }
  return {worst1 <= 1e-6 && worst2 <= 1.0 + 1e-9,
          fmt("d=1 max %.2e over %zu phantoms; d=2 max %.2f cells over %zu phantoms", worst1, phantom_names(1).size(),
              worst2, phantom_names(2).size())};
}

// 7. Two-stage reconstruction order on the ball.
Outcome two_stage_order() {
  const std::vector<int> Ns = {16, 32, 64};
  const auto table = run_convergence(make_phantom("ball", 2), Ns, Pipeline::TwoStage);
  std::vector<double> errs;
  for (const auto& r : table.rows) errs.push_back(r.error);
  return {table.slope >= 2.5, fmt("sup errors %s, slope %.2f", list(errs).c_str(), table.slope)};
}

// 8. Implicit graph build in d = 2.
Outcome implicit_graph() {
  ConvergenceOptions opt;
  opt.measure = Measure::Graph;
  bool ok = true;
  std::string detail;
  for (const char* name : {"ball", "torus"}) {
    const double e16 = reconstruction_error(make_phantom(name, 2), 16, Pipeline::Implicit, opt);
    const double e32 = reconstruction_error(make_phantom(name, 2), 32, Pipeline::Implicit, opt);
    const bool pass = e32 <= 5e-3 && e16 / e32 >= 4;
    ok &= pass;
    detail += fmt("%s%s: N=16 %.2e, N=32 %.2e, ratio %.2f [%s]", detail.empty() ? "" : "; ", name, e16, e32,
                  e16 / e32, pass ? "ok" : "miss");
  }
  return {ok, detail};
}

// 9. Implicit build in d = 3.
Outcome implicit_3d() {
  const Phantom ph = make_phantom("ball", 3);
  const double ts[4] = {0.3137, 0.4521, 0.5573, 0.6419};
  std::vector<double> errs;
  std::size_t wrong = 0, total = 0;
  for (int N : {8, 16}) {
    const auto ga = build_graph_approximant(sample_phantom(ph, N, N + 1));
    const ScalarField S = [&](std::span<const double> p) { return ga.S(p); };
    errs.push_back(measure_error(ph, S, ts).sup);
    const int n = N + 1;
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            const double p[4] = {static_cast<double>(i) / N, static_cast<double>(a) / N, static_cast<double>(b) / N,
                                 static_cast<double>(c) / N};
            const double lv = ph.level(p);
            if (std::abs(lv) < 1e-12) continue;
            ++total;
            wrong += (lv >= 0) != (ga.S(p) >= 0);
          }
  }
  const double ratio = errs[0] / errs[1];
  return {ratio >= 3 && wrong == 0,
          fmt("sup errors %s, ratio %.1f; sign errors %zu of %zu lattice nodes", list(errs).c_str(), ratio, wrong, total)};
}

IntervalUnion random_union(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<Interval> iv;
  for (int k = count(rng); k > 0; --k) {
    const double a = u(rng);
    iv.push_back({a, std::min(1.0, a + 0.2 * u(rng))});
  }
  return IntervalUnion(std::move(iv));
}

std::vector<double> dense(const IntervalUnion& s) {
  std::vector<double> out;
  for (const auto& iv : s.intervals()) {
    for (double y = iv.lo; y < iv.hi; y += 1e-4) out.push_back(y);
    out.push_back(iv.hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double nearest_in(const std::vector<double>& sorted, double y) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), y);
  double best = it == sorted.end() ? sorted.back() : *it;
  if (it != sorted.begin() && y - *(it - 1) <= std::abs(best - y)) best = *(it - 1);
  return best;
}

GridSet random_disks(std::mt19937& rng, int n, int count) {
  std::uniform_real_distribution<double> c(0.2, 0.8), r(0.05, 0.15);
  std::vector<std::array<double, 3>> d;
  for (int k = 0; k < count; ++k) d.push_back({c(rng), c(rng), r(rng)});
  return GridSet::sample(2, n, [&](std::span<const double> x) {
    double g = -1;
    for (const auto& e : d) g = std::max(g, e[2] - std::hypot(x[0] - e[0], x[1] - e[1]));
    return g;
  });
}

// 10. Metric average axioms.
Outcome metric_average_axioms() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  bool endpoints = true, idem = true, metric1 = true;
  double brute = 0;
  for (int k = 0; k < 100; ++k) {
    const auto A = random_union(rng), B = random_union(rng);
    const double w = u(rng);
    endpoints &= metric_average_1d(A, B, 0) == A && metric_average_1d(A, B, 1) == B;
    idem &= metric_average_1d(A, A, w) == A;
    const auto M = metric_average_1d(A, B, w);
    const double dab = hausdorff_1d(A, B);
    metric1 &= hausdorff_1d(M, A) <= dab && hausdorff_1d(M, B) <= dab;
    // Dense-pair oracle.
    const auto a = dense(A), b = dense(B);
    std::vector<double> pts;
    for (double x : a) pts.push_back((1 - w) * x + w * nearest_in(b, x));
    for (double y : b) pts.push_back((1 - w) * nearest_in(a, y) + w * y);
    std::sort(pts.begin(), pts.end());
    double e = 0;
    for (double p : pts) e = std::max(e, M.distance(p));
    for (double y : dense(M)) e = std::max(e, std::abs(nearest_in(pts, y) - y));
    brute = std::max(brute, e);
  }
  const int n = 65;
  const double cell = 1.0 / (n - 1);
  double excess = 0;  // in cells
  for (int k = 0; k < 20; ++k) {
    const GridSet A = random_disks(rng, n, 2), B = random_disks(rng, n, 1);
    const double w = u(rng);
    const PointCloud pa = in_set_nodes(A, n), pb = in_set_nodes(B, n);
    const PointCloud pm = in_set_nodes(metric_average_grid(A, B, w), n);
    const double dab = hausdorff_points(pa, pb);
    excess = std::max({excess, (hausdorff_points(pm, pa) - dab) / cell, (hausdorff_points(pm, pb) - dab) / cell});
  }
  const bool pass = endpoints && idem && metric1 && brute <= 1e-3 && excess <= 1.5;
  return {pass, fmt("1d endpoints %s, idempotence %s, metric property %s on 100 pairs, oracle gap %.1e; "
                    "2d metric property excess %.2f cells (tolerance 1.5) on 20 pairs",
                    endpoints ? "exact" : "FAILED", idem ? "exact" : "FAILED", metric1 ? "holds" : "FAILED", brute,
                    std::max(excess, 0.0))};
}

// 11. MLS distance order on a circle cloud.
Outcome mls_order() {
  const double r = 0.3;
  std::vector<int> Ns = {32, 64};
  std::vector<double> errs;
  for (int N : Ns) {
    const double h = 1.0 / N;
    PointCloud c(2);
    const int m = static_cast<int>(std::ceil(2 * kPi * r / h));
    for (int k = 0; k < m; ++k) {
      const double p[2] = {0.5 + r * std::cos(2 * kPi * k / m), 0.5 + r * std::sin(2 * kPi * k / m)};
      c.add(p);
    }
    const IndexedCloud idx(c);
    double worst = 0;
    for (int k = 0; k < 53; ++k) {
      const double a = 0.071 + 2 * kPi * k / 53;
      for (double off : {0.04, 0.01, -0.01, -0.04}) {
        const double p[2] = {0.5 + (r + off) * std::cos(a), 0.5 + (r + off) * std::sin(a)};
        worst = std::max(worst, std::abs(mls_project(p, idx, MLSConfig::for_spacing(h)).distance - std::abs(off)));
      }
    }
    errs.push_back(worst);
  }
  const double sl = slope_vs_N(Ns, errs);
  return {sl >= 2.5, fmt("errors %s, slope %.2f", list(errs).c_str(), sl)};
}

// 12. Fill distance of the boundary clouds on the dumbbell.
Outcome cloud_sufficiency() {
  const Phantom base = make_phantom("dumbbell", 2);
  const int N = 64;
  const double h = 1.0 / N;
  double f0 = 0, f01 = 0;
  // The cap positions relative to the sample lattice vary with a t shift.
  for (int k = 0; k < 8; ++k) {
    const double s = k * h / 8;
    Phantom ph = base;
    ph.level = [b = base.level, s](std::span<const double> p) {
      std::vector<double> q(p.begin(), p.end());
      q[0] -= s;
      return b(q);
    };
    PointCloud surface(3);
    for (const auto& p : zero_set_points(ph.level, 3, 160)) surface.add(p);
    const auto svf = sample_phantom(ph, N, 2 * N + 1);
    const PointCloud q0 = collect_q0(svf);
    PointCloud all = q0;
    all.append(collect_q1(svf));
    f0 = std::max(f0, fill_distance(q0, surface) / h);
    f01 = std::max(f01, fill_distance(all, surface) / h);
  }
  return {f01 <= 4 && f0 > 4, fmt("worst over 8 t shifts: Q0 %.2fh, Q0+Q1 %.2fh (bound 4h)", f0, f01)};
}

// 13. Byte-identical archives from two reconstruct runs.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "svf_acceptance";
  fs::create_directories(dir);
  const std::string in = (dir / "ball.json").string();
  save_samples(sample_phantom(make_phantom("ball", 2), 16, 33), in, "ball");
  std::string texts[2];
  for (int k = 0; k < 2; ++k) {
    const std::string path = (dir / ("archive" + std::to_string(k) + ".json")).string();
    std::ostringstream out, err;
    if (cli_run({"reconstruct", in, "-o", path}, out, err) != 0) return {false, "reconstruct failed: " + err.str()};
    texts[k] = read_text_file(path);
  }
  return {texts[0] == texts[1] && !texts[0].empty(),
          fmt("%zu-byte archives %s", texts[0].size(), texts[0] == texts[1] ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  Svf1dConfig case_a, case_b;
  case_a.q = 3;
  case_b.k = 3;
  const std::vector<Criterion> criteria = {
      {1, "quasi-interpolation exactness", 1, qi_exactness},
      {2, "quasi-interpolation order", 1, qi_order},
      {3, "zero level of a quasi-interpolated distance", 10, circle_level_order},
      {4, "Case A PCT order", 5, [&] { return pct_order("crossing", {16, 32, 64}, case_a, 3.5); }},
      {5, "Case B PCT order", 5, [&] { return pct_order("cap", {32, 64, 128}, case_b, 1.2); }},
      {6, "interpolation property", 30, interpolation_property},
      {7, "two-stage d=2 order", 120, two_stage_order},
      {8, "implicit graph d=2", 300, implicit_graph},
      {9, "implicit graph d=3", 600, implicit_3d},
      {10, "metric average axioms", 60, metric_average_axioms},
      {11, "MLS distance order", 10, mls_order},
      {12, "cloud sufficiency", 60, cloud_sufficiency},
      {13, "determinism", 120, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const Error& e) {
      o = {false, std::string("error ") + std::string(to_string(e.code())) + ": " + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %2d %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : fmt(", over the %.0f s budget", c.budget_s).c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

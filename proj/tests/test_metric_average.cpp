// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "svf/error.hpp"
#include "svf/metric_average.hpp"
#include "svf/phantoms.hpp"

using namespace svf;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

IntervalUnion random_union(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<Interval> iv;
  for (int k = count(rng); k > 0; --k) {
    const double a = u(rng), len = 0.2 * u(rng);
    iv.push_back({a, std::min(1.0, a + len)});
  }
  return IntervalUnion(std::move(iv));
}

std::vector<double> dense(const IntervalUnion& s, double step) {
  std::vector<double> out;
  for (const auto& iv : s.intervals()) {
    for (double y = iv.lo; y < iv.hi; y += step) out.push_back(y);
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

// Dense discretisation of both sets, every point paired with its nearest
// point on the other side, blended.
std::vector<double> brute_force_average(const IntervalUnion& A, const IntervalUnion& B, double w) {
  const auto a = dense(A, 1e-4), b = dense(B, 1e-4);
  std::vector<double> out;
  for (double x : a) out.push_back((1 - w) * x + w * nearest_in(b, x));
  for (double y : b) out.push_back((1 - w) * nearest_in(a, y) + w * y);
  std::sort(out.begin(), out.end());
  return out;
}

double hausdorff_to_points(const IntervalUnion& s, const std::vector<double>& pts) {
  double d = 0;
  for (double p : pts) d = std::max(d, s.distance(p));
  for (double y : dense(s, 1e-4)) d = std::max(d, std::abs(nearest_in(pts, y) - y));
  return d;
}

GridSet disks(int n, std::initializer_list<std::array<double, 3>> list) {
  const std::vector<std::array<double, 3>> v(list);
  return GridSet::sample(2, n, [&](std::span<const double> x) {
    double g = -1;
    for (const auto& c : v) g = std::max(g, c[2] - std::hypot(x[0] - c[0], x[1] - c[1]));
    return g;
  });
}

double grid_hausdorff(const GridSet& a, const GridSet& b, int n) {
  return hausdorff_points(in_set_nodes(a, n), in_set_nodes(b, n));
}

}  // namespace

TEST_CASE("1d metric average identities") {
  const IntervalUnion A{{0.1, 0.3}, {0.5, 0.55}, {0.8, 0.95}};
  const IntervalUnion B{{0.2, 0.25}, {0.7, 0.9}};
  CHECK(metric_average_1d(A, B, 0) == A);
  CHECK(metric_average_1d(A, B, 1) == B);
  for (double w : {0.0, 0.3, 0.5, 1.0}) CHECK(metric_average_1d(A, A, w) == A);

  const IntervalUnion half = metric_average_1d({{0, 1}}, {{2, 3}}, 0.5);
  REQUIRE(half.size() == 1);
  CHECK(half[0].lo == 1.0);
  CHECK(half[0].hi == 2.0);

  CHECK(code_of([&] { metric_average_1d({}, B, 0.5); }) == ErrorCode::EmptySet);
  CHECK(code_of([&] { metric_average_1d(A, B, 1.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("1d metric property and brute force agreement") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto A = random_union(rng), B = random_union(rng);
    const double w = u(rng);
    const auto M = metric_average_1d(A, B, w);
    const double dab = hausdorff_1d(A, B);
    CHECK(hausdorff_1d(M, A) <= dab + 1e-12);
    CHECK(hausdorff_1d(M, B) <= dab + 1e-12);
    // The distances split in proportion to the weight.
    CHECK(hausdorff_1d(M, A) == doctest::Approx(w * dab).epsilon(1e-9));
    CHECK(hausdorff_1d(M, B) == doctest::Approx((1 - w) * dab).epsilon(1e-9));
    if (trial < 20) CHECK(hausdorff_to_points(M, brute_force_average(A, B, w)) < 1e-3);
  }
}

TEST_CASE("metric pairs include ties") {
  PointCloud a(2), b(2);
  const double p[2] = {0.5, 0.5}, q1[2] = {0.4, 0.5}, q2[2] = {0.6, 0.5};
  a.add(p);
  b.add(q1);
  b.add(q2);
  const auto pairs = metric_pairs(a, b);
  // (p, q1), (p, q2) from a's side and the same two from b's side.
  CHECK(pairs.size() == 4);
}

TEST_CASE("grid metric average") {
  const int n = 65;
  const double cell = 1.0 / (n - 1);
  const GridSet A = disks(n, {{{0.3, 0.5, 0.15}}});
  const GridSet B = disks(n, {{{0.6, 0.4, 0.2}}});

  CHECK(grid_hausdorff(metric_average_grid(A, B, 0), A, n) <= cell * 1.5);
  CHECK(grid_hausdorff(metric_average_grid(A, B, 1), B, n) <= cell * 1.5);
  CHECK(grid_hausdorff(metric_average_grid(A, A, 0.4), A, n) <= cell * 1.5);

  // Two disjoint disks against one in the middle: each half of the middle
  // disk is pulled towards its own partner.
  const GridSet two = disks(n, {{{0.25, 0.5, 0.1}}, {{0.75, 0.5, 0.1}}});
  const GridSet mid = disks(n, {{{0.5, 0.5, 0.1}}});
  const GridSet avg = metric_average_grid(two, mid, 0.5);
  const double l[2] = {0.375, 0.5}, r[2] = {0.625, 0.5}, c[2] = {0.5, 0.5};
  CHECK(avg.contains(l));
  CHECK(avg.contains(r));
  CHECK(!avg.contains(c));

  // Brute force: every pair of in-set nodes, kept when it realises a
  // nearest distance from either side.
  const PointCloud pa = in_set_nodes(two, n), pb = in_set_nodes(mid, n);
  std::vector<double> da(pa.size(), 1e9), db(pb.size(), 1e9);
  auto dist = [&](std::size_t i, std::size_t j) {
    return std::hypot(pa.point(i)[0] - pb.point(j)[0], pa.point(i)[1] - pb.point(j)[1]);
  };
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j) {
      da[i] = std::min(da[i], dist(i, j));
      db[j] = std::min(db[j], dist(i, j));
    }
  PointCloud blend(2);
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j)
      if (dist(i, j) <= da[i] + 1e-12 || dist(i, j) <= db[j] + 1e-12) {
        const double x[2] = {0.5 * (pa.point(i)[0] + pb.point(j)[0]), 0.5 * (pa.point(i)[1] + pb.point(j)[1])};
        blend.add(x);
      }
  CHECK(hausdorff_points(in_set_nodes(avg, n), blend) <= cell * 1.5);

  CHECK(code_of([&] { metric_average_grid(A, disks(n, {{{2, 2, 0.1}}}), 0.5); }) == ErrorCode::EmptySet);
  CHECK(code_of([&] { metric_average_grid(GridSet(3, 3, std::vector<double>(27, 1)), A, 0.5); }) ==
        ErrorCode::DimensionUnsupported);
}

TEST_CASE("grid metric property on random sets") {
  const int n = 65;
  const double cell = 1.0 / (n - 1);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> c(0.2, 0.8), rad(0.05, 0.15), u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const GridSet A = disks(n, {{{c(rng), c(rng), rad(rng)}}, {{c(rng), c(rng), rad(rng)}}});
    const GridSet B = disks(n, {{{c(rng), c(rng), rad(rng)}}});
    const double w = u(rng);
    const GridSet M = metric_average_grid(A, B, w);
    const double dab = grid_hausdorff(A, B, n);
    CHECK(grid_hausdorff(M, A, n) <= dab + 1.5 * cell);
    CHECK(grid_hausdorff(M, B, n) <= dab + 1.5 * cell);
  }
}

TEST_CASE("graph by metric average") {
  const Phantom ball = make_phantom("ball", 2);
  MetricGraphConfig cfg;
  cfg.resolution = 65;
  const auto g = build_graph_by_metric_average(sample_phantom(ball, 32, 65), cfg);
  const auto& meta = g.metadata();
  CHECK(meta.floor_applied);
  CHECK(meta.tau_spacing == 1.0 / 1024);
  CHECK(g.frame_count() == 1025);
  // Section radii change fastest next to the caps.
  CHECK(meta.lipschitz_estimate > 0.5);
  CHECK(meta.empty_operand_segments == 2);

  CHECK(g.evaluate(g.tau(300)) == g.frame(300));
  const double t = (300.4) / 1024;
  const GridSet mid = g.evaluate(t);
  const double cell = 1.0 / 64;
  const double d01 = grid_hausdorff(g.frame(300), g.frame(301), 65);
  CHECK(grid_hausdorff(mid, g.frame(300), 65) <= d01 + 1.5 * cell);

  const GridSet want = GridSet::sample(2, 65, [&](std::span<const double> x) { return ball.level_at(t, x); });
  CHECK(grid_hausdorff(mid, want, 65) <= cell);

  // Near the lower cap one end is empty; the other is eroded.
  std::size_t first = 0;
  while (g.frame_empty(first)) ++first;
  const GridSet edge = g.evaluate(g.tau(first) - 0.5 * meta.tau_spacing);
  CHECK(in_set_nodes(edge, 65).size() <= in_set_nodes(g.frame(first), 65).size());

  CHECK(code_of([&] { g.evaluate(-0.1); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([&] { build_graph_by_metric_average(sample_phantom(make_phantom("ball", 1), 8)); }) ==
        ErrorCode::DimensionMismatch);
}

// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "svf/error.hpp"
#include "svf/geom.hpp"
#include "svf/kdtree.hpp"

using namespace svf;

namespace {

// Dense-point oracle for the 1D Hausdorff distance.
double brute_hausdorff(const IntervalUnion& a, const IntervalUnion& b, double step) {
  auto points = [&](const IntervalUnion& u) {
    std::vector<double> p;
    for (const auto& iv : u.intervals()) {
      const int k = std::max(1, static_cast<int>(std::ceil(iv.length() / step)));
      for (int j = 0; j <= k; ++j) p.push_back(iv.lo + iv.length() * j / k);
    }
    return p;
  };
  auto directed = [](const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0;
    for (double u : x) {
      double best = 1e300;
      for (double v : y) best = std::min(best, std::abs(u - v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  const auto pa = points(a);
  const auto pb = points(b);
  return std::max(directed(pa, pb), directed(pb, pa));
}

IntervalUnion random_union(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<Interval> raw;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    raw.push_back({a, a + 0.3 * (b - a)});
  }
  return IntervalUnion(raw);
}

double disk_g(std::span<const double> x) {
  return 0.09 - (x[0] - 0.5) * (x[0] - 0.5) - (x[1] - 0.5) * (x[1] - 0.5);
}

}  // namespace

TEST_CASE("interval union normalizes and merges") {
  IntervalUnion u{{0.5, 0.6}, {0.1, 0.2}, {0.2 + 1e-10, 0.3}};
  REQUIRE(u.size() == 2);
  CHECK(u[0].lo == 0.1);
  CHECK(u[0].hi == 0.3);
  CHECK(normalize(u) == u);
  CHECK(normalize(normalize(u)) == normalize(u));
  CHECK_THROWS_AS(IntervalUnion({{0.3, 0.2}}), Error);
  CHECK(IntervalUnion{}.empty());
}

TEST_CASE("hausdorff_1d examples") {
  CHECK(hausdorff_1d({{0, 1}}, {{0, 1}}) == 0);
  CHECK(hausdorff_1d({{0, 1}}, {{0, 2}}) == doctest::Approx(1));
  const IntervalUnion a{{0, 1}, {3, 4}};
  const IntervalUnion b{{0, 4}};
  CHECK(hausdorff_1d(a, b) == doctest::Approx(1));
  CHECK(brute_hausdorff(a, b, 1e-3) == doctest::Approx(1).epsilon(1e-3));
  try {
    hausdorff_1d({}, b);
    FAIL("expected EmptySet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySet);
  }
}

TEST_CASE("hausdorff_1d matches dense oracle and is a metric") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_union(rng);
    const auto b = random_union(rng);
    const auto c = random_union(rng);
    const double ab = hausdorff_1d(a, b);
    CHECK(ab == doctest::Approx(hausdorff_1d(b, a)));
    CHECK(hausdorff_1d(a, a) == 0);
    CHECK(ab <= hausdorff_1d(a, c) + hausdorff_1d(c, b) + 1e-14);
    if (!(a == b)) CHECK(ab > 0);
    if (trial < 20) CHECK(std::abs(ab - brute_hausdorff(a, b, 2e-4)) < 5e-4);
  }
}

TEST_CASE("complement in the unit interval") {
  CHECK(complement_in_unit({{0.2, 0.8}}) == IntervalUnion{{0, 0.2}, {0.8, 1}});
  CHECK(complement_in_unit({}) == IntervalUnion{{0, 1}});
  CHECK(complement_in_unit({{0, 1}}).empty());
  const IntervalUnion u{{0, 0.3}, {0.4, 0.5}};
  CHECK(complement_in_unit(complement_in_unit(u)) == u);
}

TEST_CASE("slice_gridset of a disk") {
  const GridSet g = GridSet::sample(2, 41, disk_g);

  SUBCASE("equator gives analytic roots") {
    auto s = std::get<IntervalUnion>(slice_gridset(g, 1, 0.5));
    REQUIRE(s.size() == 1);
    CHECK(s[0].lo == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s[0].hi == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("outside is empty") {
    CHECK(std::get<IntervalUnion>(slice_gridset(g, 1, 0.9)).empty());
  }
  SUBCASE("off-grid slice within 1e-6 of the analytic formula") {
    // 0.7 * 40 = 28 is on-grid; use a coarse grid where 0.7 falls between nodes.
    const GridSet coarse = GridSet::sample(2, 16, disk_g);
    auto s = std::get<IntervalUnion>(slice_gridset(coarse, 1, 0.7));
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].lo - (0.5 - std::sqrt(0.05))) < 1e-6);
    CHECK(std::abs(s[0].hi - (0.5 + std::sqrt(0.05))) < 1e-6);
  }
  SUBCASE("on-grid slice agrees with stored node signs") {
    for (int j = 0; j < g.n(); ++j) {
      const double tau = g.coordinate(j);
      auto s = std::get<IntervalUnion>(slice_gridset(g, 0, tau));
      for (int k = 0; k < g.n(); ++k) {
        const int idx[2] = {j, k};
        CHECK(s.contains(g.coordinate(k)) == (g.node_value(idx) >= 0));
      }
    }
  }
  SUBCASE("3D slice keeps a GridSet") {
    const GridSet g3 = GridSet::sample(3, 9, [](std::span<const double> x) { return x[0] - x[2]; });
    auto s = slice_gridset(g3, 2, 0.5);
    REQUIRE(std::holds_alternative<GridSet>(s));
    CHECK(std::get<GridSet>(s).dim() == 2);
  }
}

TEST_CASE("line_section of a 3D ball") {
  const GridSet g = GridSet::sample(3, 21, [](std::span<const double> x) {
    return 0.09 - (x[0] - 0.5) * (x[0] - 0.5) - (x[1] - 0.5) * (x[1] - 0.5) -
           (x[2] - 0.5) * (x[2] - 0.5);
  });
  const double fixed[2] = {0.6, 0.55};
  auto s = line_section(g, fixed);
  const double half = std::sqrt(0.09 - 0.01 - 0.0025);
  REQUIRE(s.size() == 1);
  CHECK(s[0].lo == doctest::Approx(0.5 - half).epsilon(1e-10));
  CHECK(s[0].hi == doctest::Approx(0.5 + half).epsilon(1e-10));
}

TEST_CASE("grid value_at reproduces nodes and cubics") {
  const GridSet g = GridSet::sample(2, 7, [](std::span<const double> x) {
    return x[0] * x[0] * x[0] - 2 * x[1] * x[1] * x[0] + 0.3;
  });
  const double p[2] = {0.37, 0.81};
  CHECK(g.value_at(p) == doctest::Approx(0.37 * 0.37 * 0.37 - 2 * 0.81 * 0.81 * 0.37 + 0.3));
  const int idx[2] = {2, 5};
  const double q[2] = {2.0 / 6, 5.0 / 6};
  CHECK(g.value_at(q) == g.node_value(idx));
  CHECK_THROWS_AS(GridSet(2, 4, std::vector<double>(15)), Error);
}

TEST_CASE("hausdorff_points examples") {
  PointCloud a(2), b(2);
  const double p0[2] = {0, 0};
  const double p1[2] = {3, 4};
  a.add(p0);
  b.add(p1);
  CHECK(hausdorff_points(a, b) == doctest::Approx(5));
  CHECK(hausdorff_points(a, a) == 0);

  PointCloud c1(2), c2(2);
  for (int k = 0; k < 1000; ++k) {
    const double th = 2 * std::numbers::pi * k / 1000;
    const double u[2] = {std::cos(th), std::sin(th)};
    const double v[2] = {1.1 * std::cos(th + 0.001), 1.1 * std::sin(th + 0.001)};
    c1.add(u);
    c2.add(v);
  }
  CHECK(std::abs(hausdorff_points(c1, c2) - 0.1) < 0.01);
  CHECK_THROWS_AS(hausdorff_points(PointCloud(2), c1), Error);
}

TEST_CASE("fill_distance examples") {
  PointCloud gamma(1), x(1);
  for (int k = 0; k <= 10000; ++k) {
    const double p[1] = {k / 10000.0};
    gamma.add(p);
  }
  for (double v : {0.0, 0.5, 1.0}) {
    const double p[1] = {v};
    x.add(p);
  }
  CHECK(fill_distance(x, gamma) == doctest::Approx(0.5));
  CHECK(fill_distance(gamma, gamma) == 0);

  PointCloud circle(2), sixteen(2);
  for (int k = 0; k < 16000; ++k) {
    const double th = 2 * std::numbers::pi * k / 16000;
    const double p[2] = {std::cos(th), std::sin(th)};
    circle.add(p);
    if (k % 1000 == 0) sixteen.add(p);
  }
  const double oracle = 2 * std::sin(std::numbers::pi / 16);
  CHECK(std::abs(fill_distance(sixteen, circle) - oracle) < 0.02 * oracle);
}

TEST_CASE("kd-tree radius query agrees with brute force") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> coords(3 * 500);
  for (auto& c : coords) c = u(rng);
  KdTree tree(3, coords);
  for (int trial = 0; trial < 20; ++trial) {
    const double q[3] = {u(rng), u(rng), u(rng)};
    std::vector<std::size_t> brute;
    double best = 1e300;
    for (std::size_t i = 0; i < 500; ++i) {
      double d2 = 0;
      for (int a = 0; a < 3; ++a) d2 += (coords[3 * i + a] - q[a]) * (coords[3 * i + a] - q[a]);
      if (d2 <= 0.04) brute.push_back(i);
      best = std::min(best, d2);
    }
    CHECK(tree.radius(q, 0.2) == brute);
    CHECK(tree.nearest(q).dist2 == best);
  }
}

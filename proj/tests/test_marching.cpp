// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "svf/error.hpp"
#include "svf/marching.hpp"

using namespace svf;

namespace {

double circle_sdf(std::span<const double> x) {
  return 0.3 - std::hypot(x[0] - 0.5, x[1] - 0.5);
}

double sphere_sdf(std::span<const double> x) {
  return 0.3 - std::sqrt((x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.47) * (x[1] - 0.47) +
                         (x[2] - 0.52) * (x[2] - 0.52));
}

}  // namespace

TEST_CASE("contour of a circle signed distance") {
  const auto c = extract_contour(circle_sdf, 40);
  REQUIRE(!c.empty());
  double worst = 0;
  for (const auto& v : c.vertices) worst = std::max(worst, std::abs(std::hypot(v[0] - 0.5, v[1] - 0.5) - 0.3));
  CHECK(worst < 1e-6);
  // A closed curve: every vertex is shared by two segments.
  std::vector<int> degree(c.vertices.size());
  for (const auto& s : c.segments) {
    ++degree[s[0]];
    ++degree[s[1]];
  }
  for (int d : degree) CHECK(d == 2);
  // Vertices cover the circle at the grid resolution.
  for (int k = 0; k < 360; ++k) {
    const double th = k * M_PI / 180;
    double best = 1e9;
    for (const auto& v : c.vertices)
      best = std::min(best, std::hypot(v[0] - 0.5 - 0.3 * std::cos(th), v[1] - 0.5 - 0.3 * std::sin(th)));
    CHECK(best < 1.0 / 40);
  }
}

TEST_CASE("saddle faces follow the asymptotic decider") {
  // Two disks touching diagonally across one cell: f = xy-type saddle.
  auto f = [](std::span<const double> x) { return (x[0] - 0.5) * (x[1] - 0.5) + 0.01; };
  const auto c = extract_contour(f, 1);
  // Corners: (0,0) and (1,1) inside, saddle value 0.01 > 0 connects them.
  REQUIRE(c.segments.size() == 2);
  for (const auto& s : c.segments) {
    const auto& a = c.vertices[s[0]];
    const auto& b = c.vertices[s[1]];
    // Each segment cuts off one outside corner, so it stays near (1,0) or (0,1).
    const double mid[2] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    CHECK(std::abs(mid[0] - mid[1]) > 0.2);
  }
}

TEST_CASE("sphere isosurface is closed and accurate") {
  const auto mesh = extract_isosurface(sphere_sdf, 64);
  REQUIRE(!mesh.empty());
  CHECK(is_closed_manifold(mesh));
  double worst = 0;
  for (const auto& v : mesh.vertices) {
    const double p[3] = {v[0], v[1], v[2]};
    worst = std::max(worst, std::abs(sphere_sdf(p)));
  }
  CHECK(worst < 1e-5);
  // Normals point outward.
  int outward = 0;
  for (const auto& t : mesh.triangles) {
    const auto& a = mesh.vertices[t[0]];
    const auto& b = mesh.vertices[t[1]];
    const auto& c = mesh.vertices[t[2]];
    const double e1[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double e2[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const double n[3] = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
    const double r[3] = {a[0] - 0.5, a[1] - 0.47, a[2] - 0.52};
    outward += n[0] * r[0] + n[1] * r[1] + n[2] * r[2] > 0;
  }
  CHECK(outward == static_cast<int>(mesh.triangles.size()));
}

TEST_CASE("two nearby blobs stay closed") {
  auto f = [](std::span<const double> x) {
    auto ball = [&](double cx, double cy, double cz, double r) {
      return r - std::sqrt((x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy) + (x[2] - cz) * (x[2] - cz));
    };
    return std::max(ball(0.35, 0.5, 0.5, 0.16), ball(0.66, 0.52, 0.49, 0.16));
  };
  for (int cells : {7, 11, 16, 23}) CHECK(is_closed_manifold(extract_isosurface(f, cells)));
}

TEST_CASE("no sign change gives empty output") {
  auto positive = [](std::span<const double>) { return 1.0; };
  CHECK(extract_contour(positive, 8).empty());
  CHECK(extract_isosurface(positive, 8).empty());
}

TEST_CASE("zero_level_extract on a tensor spline") {
  const int N = 8;
  std::vector<double> v;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      for (int k = 0; k <= N; ++k) {
        const double x = double(i) / N, y = double(j) / N, z = double(k) / N;
        v.push_back(0.09 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5) - (z - 0.5) * (z - 0.5));
      }
  const auto s = TensorSpline::build(3, 3, N, v);
  const auto full = zero_level_extract(s, {});
  REQUIRE(std::holds_alternative<TriangleMesh>(full));
  CHECK(is_closed_manifold(std::get<TriangleMesh>(full)));

  const FixedAxis fixed[1] = {{0, 0.5}};
  const auto slice = zero_level_extract(s, fixed);
  REQUIRE(std::holds_alternative<Contour>(slice));
  for (const auto& p : std::get<Contour>(slice).vertices)
    CHECK(std::abs(std::hypot(p[0] - 0.5, p[1] - 0.5) - 0.3) < 1e-10);

  const FixedAxis two[2] = {{0, 0.5}, {1, 0.5}};
  CHECK_THROWS_AS(zero_level_extract(s, two), Error);

  std::ostringstream obj;
  write_obj(obj, std::get<TriangleMesh>(full));
  CHECK(obj.str().find("f ") != std::string::npos);
}

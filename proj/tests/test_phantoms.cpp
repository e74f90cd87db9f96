// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "svf/error.hpp"
#include "svf/marching.hpp"
#include "svf/phantoms.hpp"

using namespace svf;

TEST_CASE("phantom catalogue") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& name : phantom_names(d)) {
      const Phantom ph = make_phantom(name, d);
      CHECK(ph.d == d);
      CHECK(ph.name == name);
    }
  CHECK(phantom_names(1).size() == 9);
  CHECK(phantom_names(2).size() == 6);
  try {
    make_phantom("teapot", 2);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  CHECK_THROWS_AS(make_phantom("crossing", 2), Error);
  try {
    make_phantom("ball", 4);
    FAIL("expected DimensionUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionUnsupported);
  }
}

TEST_CASE("ball slices are disks") {
  const Phantom ball = make_phantom("ball", 2);
  for (double t : {0.3, 0.5, 0.71}) {
    const double r = std::sqrt(0.09 - (t - 0.5) * (t - 0.5));
    const double fixed[1] = {0.5};
    const auto s = phantom_section(ball, t, fixed);
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].lo - (0.5 - r)) < 1e-12);
    CHECK(std::abs(s[0].hi - (0.5 + r)) < 1e-12);
  }
  const double off[1] = {0.5};
  CHECK(phantom_section(ball, 0.1, off).empty());

  const auto svf = sample_phantom(ball, 8, 17);
  CHECK(svf.N() == 8);
  CHECK(svf.n_per_axis() == 17);
  const double c[2] = {0.5, 0.5};
  CHECK(svf.grid(4).contains(c));
  CHECK(!svf.grid(0).contains(c));

  const auto line = sample_phantom(make_phantom("ball", 1), 10);
  CHECK(line.kind() == SampleKind::Intervals);
  CHECK(std::abs(line.interval(5)[0].lo - 0.2) < 1e-12);
}

TEST_CASE("torus slices are annuli") {
  const Phantom torus = make_phantom("torus", 2);
  const double fixed[1] = {0.5};
  const auto s = phantom_section(torus, 0.5, fixed);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0].lo - 0.1) < 1e-12);
  CHECK(std::abs(s[0].hi - 0.4) < 1e-12);
  CHECK(std::abs(s[1].lo - 0.6) < 1e-12);
  CHECK(std::abs(s[1].hi - 0.9) < 1e-12);
  CHECK(phantom_section(torus, 0.33, fixed).empty());

  // d = 1: an annulus, with a hole between t = 0.4 and 0.6.
  const Phantom ring = make_phantom("torus", 1);
  CHECK(phantom_section(ring, 0.5).size() == 2);
  CHECK(phantom_section(ring, 0.3).size() == 1);
  CHECK(ring.pcts.size() == 4);
}

TEST_CASE("two balls merge") {
  const Phantom two = make_phantom("two_ball", 2);
  const double fixed[1] = {0.5};
  CHECK(phantom_section(two, 0.5, fixed).size() == 1);
  CHECK(phantom_section(two, 0.32, fixed).size() == 2);

  const Phantom line = make_phantom("two_ball", 1);
  int a = 0;
  for (const auto& p : line.pcts) {
    if (p.kind != PctKind::A) continue;
    ++a;
    const double x[1] = {p.y_star};
    CHECK(std::abs(line.level_at(p.t_star, x)) < 1e-12);
  }
  CHECK(a == 2);
}

TEST_CASE("analytic PCTs lie on the boundary") {
  for (const auto& name : phantom_names(1)) {
    const Phantom ph = make_phantom(name, 1);
    for (const auto& p : ph.pcts) {
      const double x[1] = {p.y_star};
      CHECK_MESSAGE(std::abs(ph.level_at(p.t_star, x)) < 1e-9, name);
    }
  }
  const Phantom crossing = make_phantom("crossing", 1);
  REQUIRE(crossing.pcts.size() == 1);
  const double ts = crossing.pcts[0].t_star;
  CHECK(phantom_section(crossing, ts - 0.01).size() == 2);
  CHECK(phantom_section(crossing, ts + 0.01).size() == 1);
}

TEST_CASE("exact distance phantoms") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int d = 1; d <= 3; ++d) {
    const Phantom ball = make_phantom("ball", d);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> p(d + 1);
      double s = 0;
      for (auto& v : p) {
        v = u(rng);
        s += (v - 0.5) * (v - 0.5);
      }
      CHECK(std::abs(ball.level(p) - (0.3 - std::sqrt(s))) < 1e-14);
    }
  }
  // Membership and level agree on sign for every phantom.
  for (int d = 1; d <= 3; ++d)
    for (const auto& name : phantom_names(d)) {
      const Phantom ph = make_phantom(name, d);
      for (int k = 0; k < 40; ++k) {
        std::vector<double> x(d);
        for (auto& v : x) v = u(rng);
        const double t = u(rng);
        CHECK(ph.contains(t, x) == (ph.level_at(t, x) >= 0));
      }
    }
}

TEST_CASE("zero set distances") {
  const ScalarField c30 = [](std::span<const double> x) {
    return 0.3 - std::hypot(x[0] - 0.5, x[1] - 0.5);
  };
  const ScalarField c31 = [](std::span<const double> x) {
    return 0.31 - std::hypot(x[0] - 0.5, x[1] - 0.5);
  };
  CHECK(zero_set_hausdorff(c30, c30, 2, 100) < 1e-12);
  CHECK(std::abs(zero_set_hausdorff(c30, c31, 2, 100) - 0.01) < 1e-9);
  const double p[2] = {0.5, 0.9};
  CHECK(std::abs(distance_to_zero_set(c30, p) - 0.1) < 1e-12);

  const auto pts = zero_set_points(c30, 2, 50);
  CHECK(!pts.empty());
  for (const auto& q : pts) CHECK(std::abs(c30(q)) < 1e-12);

  const ScalarField none = [](std::span<const double>) { return -1.0; };
  CHECK(zero_set_hausdorff(none, none, 2, 10) == 0);
  CHECK(std::isinf(zero_set_hausdorff(none, c30, 2, 10)));

  const Contour contour = extract_contour(c30, 64);
  const double e = contour_hausdorff(contour, c30, 300);
  CHECK(e < 1e-3);
  CHECK(std::abs(contour_hausdorff(contour, c31, 300) - 0.01) < 1e-3);
}

TEST_CASE("measure_error against the phantom itself") {
  const double ts[3] = {0.31, 0.5, 0.64};
  for (const char* name : {"ball", "torus", "two_ball"}) {
    const Phantom ph = make_phantom(name, 2);
    const auto r = measure_error(ph, ph.level, ts, 120);
    CHECK_MESSAGE(r.sup < 1e-10, name);
    CHECK(r.error.size() == 3);
  }
  const Phantom line = make_phantom("cap", 1);
  CHECK(measure_error(line, line.level, ts).sup == 0);

  const Phantom ball = make_phantom("ball", 2);
  const ScalarField bigger = [](std::span<const double> p) {
    return 0.302 - std::sqrt((p[0] - 0.5) * (p[0] - 0.5) + (p[1] - 0.5) * (p[1] - 0.5) +
                             (p[2] - 0.5) * (p[2] - 0.5));
  };
  const double mid[1] = {0.5};
  const auto r = measure_error(ball, bigger, mid, 200);
  CHECK(std::abs(r.sup - 0.002) < 1e-9);
}

TEST_CASE("measure_error on a 1d approximant") {
  const Phantom ph = make_phantom("crossing", 1);
  const auto approx = build_approximant(sample_phantom(ph, 32));
  const double ts[4] = {0.1, 0.33, 0.6, 0.77};
  const auto r = measure_error(ph, approx, ts);
  CHECK(r.sup < 1e-4);
  REQUIRE(r.pct_errors.size() == 1);
  CHECK(r.pct_errors[0] < 1e-5);
}

TEST_CASE("convergence slope") {
  const int Ns[3] = {16, 32, 64};
  const double err[3] = {std::pow(16.0, -4), std::pow(32.0, -4), std::pow(64.0, -4)};
  CHECK(std::abs(convergence_slope(Ns, err) - 4) < 1e-12);
}

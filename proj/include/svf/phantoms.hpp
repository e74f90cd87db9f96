// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svf/geom.hpp"
#include "svf/marching.hpp"
#include "svf/svf1d.hpp"

namespace svf {

enum class Smoothness { Smooth, Piecewise };

// An analytic set-valued function given by a level function on (t, x_1..x_d):
// Graph(F) = {level >= 0}.
struct Phantom {
  std::string name;
  int d = 2;
  ScalarField level;
  bool exact_distance = false;  // level is the signed distance to the graph boundary
  std::vector<PCT> pcts;        // points of topology change, d = 1 only
  Smoothness smoothness = Smoothness::Smooth;

  bool contains(double t, std::span<const double> x) const;
  double level_at(double t, std::span<const double> x) const;
};

// ball, ellipsoid, torus, two_ball, dumbbell, cylinder for d in 1..3;
// crossing, cap and two_holes for d = 1. Throws InvalidArgument.
Phantom make_phantom(std::string_view name, int d);
std::vector<std::string> phantom_names(int d);

// F(t) ∩ {x_2 = fixed_0, ...} along x_1, by sign scan and bisection.
IntervalUnion phantom_section(const Phantom& ph, double t, std::span<const double> fixed = {},
                              int scan = 4096);

// d = 1: exact sections. d >= 2: GridSet of the level function at n_per_axis
// nodes per axis (0 selects N + 1).
SampledSVF sample_phantom(const Phantom& ph, int N, int n_per_axis = 0);

// Distance from p to {f = 0}, by gradient (Newton) projection with finite
// difference gradients. Returns infinity if the iteration fails.
double distance_to_zero_set(const ScalarField& f, std::span<const double> p);

// Hausdorff distance between the zero sets of a and b inside [0,1]^dim: the
// zero set of each is sampled on a lattice and projected onto the other.
// Returns 0 when both are empty and infinity when exactly one is.
double zero_set_hausdorff(const ScalarField& a, const ScalarField& b, int dim, int cells);

// Hausdorff distance between a 2D polyline and the zero set of f.
double contour_hausdorff(const Contour& c, const ScalarField& f, int cells);

struct ErrorReport {
  std::vector<double> t;
  std::vector<double> error;
  double sup = 0;
  std::vector<double> pct_errors;  // d = 1
};

// Per-t Hausdorff distance between {x : approx(t, x) >= 0} boundaries and the
// phantom's slice boundaries (d >= 2), or between interval sections (d = 1).
ErrorReport measure_error(const Phantom& ph, const ScalarField& approx, std::span<const double> ts,
                          int cells = 0);

// d = 1: section errors of an svf1d approximant plus PCT location errors
// (each analytic PCT matched with the nearest computed one of the same kind).
ErrorReport measure_error(const Phantom& ph, const SVF1DApproximant& approx,
                          std::span<const double> ts);

// Least-squares slope of -log2(err) against log2(N).
double convergence_slope(std::span<const int> Ns, std::span<const double> err);

}  // namespace svf

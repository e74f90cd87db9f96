// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "svf/quasi_spline.hpp"

namespace svf {

using ScalarField = std::function<double(std::span<const double>)>;

// Zero level of a 2D field as a set of segments between shared vertices.
struct Contour {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 2>> segments;
  bool empty() const { return segments.empty(); }
};

// Indexed triangle list. Triangles are wound so that their normals point
// toward decreasing field values (out of the set f >= 0).
struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;
  bool empty() const { return triangles.empty(); }
};

// Marching squares over [0,1]^2 with `cells` cells per axis. Edge crossings
// are polished by bisection on f; saddle faces use the asymptotic decider.
Contour extract_contour(const ScalarField& f, int cells);

// Marching cubes over [0,1]^3. Each cube's polygon is assembled from the
// segments of its six faces, so neighbouring cubes always agree and the mesh
// is closed wherever the surface does not reach the domain boundary.
TriangleMesh extract_isosurface(const ScalarField& f, int cells);

struct FixedAxis {
  int axis = 0;
  double value = 0;
};

// Zero level of a tensor spline with some coordinates held fixed. The free
// dimension must be 2 or 3. cells = 0 selects twice the knot resolution.
std::variant<Contour, TriangleMesh> zero_level_extract(const TensorSpline& s,
                                                       std::span<const FixedAxis> fixed,
                                                       int cells = 0);

// Points where a field on [0,1]^dim changes sign along the edges of a lattice
// with `cells` cells per axis.
std::vector<std::vector<double>> zero_set_points(const ScalarField& f, int dim, int cells);

// Every undirected edge is used by exactly two triangles, once in each
// direction.
bool is_closed_manifold(const TriangleMesh& mesh);

void write_obj(std::ostream& out, const TriangleMesh& mesh);
void write_obj(std::ostream& out, const Contour& contour);

}  // namespace svf

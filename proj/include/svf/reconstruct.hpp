// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svf/distance.hpp"
#include "svf/geom.hpp"
#include "svf/marching.hpp"
#include "svf/quasi_spline.hpp"
#include "svf/svf1d.hpp"

namespace svf {

struct ReconstructConfig {
  int m = 3;  // spline degree; MLS patches have degree m - 1
  Svf1dConfig svf1d;
  double rho_factor = 4.0;
  int s_target = 4;
  bool q1_all_axes = true;  // false: lines along x_1 only
  int sign_sweeps = 8;      // residual corrections while S disagrees in sign with a node
};

// Outcome of the svf1d build on one axis-parallel line.
struct SectionReport {
  int axis = 0;           // direction of the line, 0 for x_1
  std::vector<int> line;  // grid indices of the other coordinates
  bool built = false;
  std::string failure;  // error code name when the build failed
  int reliable_curves = 0;
  int unreliable_curves = 0;
  int failed_pcts = 0;
};

struct ReconstructDiagnostics {
  std::vector<SectionReport> sections;
  std::size_t q0_points = 0;
  std::size_t q1_points = 0;
  std::size_t far_nodes = 0;
  std::size_t mls_fallbacks = 0;
  int sign_sweeps = 0;
  std::size_t sign_mismatches = 0;  // lattice nodes where sign(S) differs after the sweeps

  int skipped_sections() const;
  int reliable_curves() const;
  int unreliable_curves() const;
};

// The 1D samples t -> F(i h) ∩ L on the line L = {x_2 = j_2 h, ..., x_d = j_d h}.
// With `axis` > 0 the line runs along x_{axis+1} and `line` indexes the others.
SampledSVF line_samples(const SampledSVF& svf, std::span<const int> line, int axis = 0);

// svf1d along x_2 = j h of a d = 2 input. Throws AllCurvesUnreliable when the
// line meets the graph but no curve passes SD1(h).
SVF1DApproximant stage1_line_sections(const SampledSVF& svf, int j, const Svf1dConfig& cfg = {});

// F~(t) for d = 2, reconstructed as x_2 -> F~(t | x_2) by a second svf1d pass
// over the stage-one sections. At a sample abscissa the result is the sample.
class TwoStage {
 public:
  TwoStage(const SampledSVF& svf, const Svf1dConfig& cfg = {});

  struct Result {
    double t = 0;
    SVF1DApproximant in_x2;        // x_2 -> x_1 intervals
    std::optional<GridSet> sample;  // set when t is a sample abscissa

    IntervalUnion section(double x2) const;
    // Membership raster with n nodes per axis; node values are signed
    // distances to the section boundary along x_1.
    GridSet raster(int n) const;
    // Boundary polylines, sampled densely in x_2 near curve ends.
    Contour boundary(int samples_per_curve = 2000) const;
  };

  Result evaluate(double t) const;
  const std::vector<SectionReport>& sections() const { return reports_; }
  const SampledSVF& source() const { return svf_; }

 private:
  SampledSVF svf_;
  Svf1dConfig cfg_;
  std::vector<std::shared_ptr<const SVF1DApproximant>> lines_;
  std::vector<SectionReport> reports_;
};

TwoStage::Result stage2_evaluate(const SampledSVF& svf, double t, const Svf1dConfig& cfg = {});

// Boundary points of every sample, found along raster edges; t = i h.
PointCloud collect_q0(const SampledSVF& svf);

// Points on the reliable svf1d curves of the grid lines along x_1 (every
// spatial axis with all_axes), at arc length spacing of at most h / 2, plus
// the PCTs the curves end at.
PointCloud collect_q1(const SampledSVF& svf, const Svf1dConfig& cfg = {},
                      std::vector<SectionReport>* reports = nullptr, bool all_axes = true);

struct GraphApproximant {
  int d = 0;
  TensorSpline S;  // over (t, x_1, ..., x_d)
  PointCloud q0;
  PointCloud q1;
  ReconstructConfig config;
  ReconstructDiagnostics diagnostics;

  friend bool operator==(const GraphApproximant& a, const GraphApproximant& b) {
    return a.d == b.d && a.S == b.S && a.q0 == b.q0 && a.q1 == b.q1;
  }
};

GraphApproximant build_graph_approximant(const SampledSVF& svf, const ReconstructConfig& cfg = {});

bool inclusion(const GraphApproximant& ga, double t, std::span<const double> x);
// S(t, .) on n nodes per axis (0 selects the knot resolution N + 1).
GridSet evaluate_set(const GraphApproximant& ga, double t, int n = 0);
// Zero level of S(t, .): a Contour for d = 2, a TriangleMesh for d = 3.
std::variant<Contour, TriangleMesh> extract_slice(const GraphApproximant& ga, double t, int cells = 0);

struct SurfaceNormal {
  std::array<double, 3> point{};   // (t, x_1, x_2)
  std::array<double, 3> normal{};  // unit, pointing out of the graph
};

// Unit normal of the plane spanned by two tangents. Throws DegenerateTangents
// when they are less than 5 degrees from parallel.
std::array<double, 3> tangent_plane_normal(const std::array<double, 3>& a,
                                           const std::array<double, 3>& b);

struct NormalsResult {
  std::vector<SurfaceNormal> normals;
  int degenerate = 0;  // intersections skipped for near-parallel tangents
};

// d = 2: at every point where a stage-one curve (x_2 = j h) crosses a sample
// boundary (t = i h), the normal from the two curve tangents.
NormalsResult normals_at_curve_intersections(const SampledSVF& svf, const Svf1dConfig& cfg = {});

}  // namespace svf

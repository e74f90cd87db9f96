// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svf/geom.hpp"

namespace svf {

struct Svf1dConfig {
  int q = 3;          // Case A local polynomial degree
  int k = 3;          // Case B: rotated polynomial of degree 2k - 1
  int p_spline = 3;   // 1 or 3
  double theta = 0.15;
};

struct Endpoint {
  double y = 0;
  bool lower = true;  // opens an interval
};

// Sorted endpoints of every sample.
std::vector<std::vector<Endpoint>> detect_boundary_points(const SampledSVF& svf);

// Strips [i h, (i + 1) h] in which a pair of adjacent endpoints is born or
// dies. Throws AmbiguousPairing when a strip holds more than one such event.
std::vector<int> detect_topology_strips(const SampledSVF& svf);

// The two endpoint sequences that meet at a topology change, ordered from the
// sample nearest the strip outward. gap_right: the pair exists for t beyond
// the strip.
struct MergingPair {
  int strip = 0;
  bool gap_right = true;
  std::vector<TimedValue> lower;
  std::vector<TimedValue> upper;
};

MergingPair merging_pair(const SampledSVF& svf, int strip);

PctKind classify_pct(const SampledSVF& svf, int strip, double theta = 0.15);
PctKind classify_pair(const MergingPair& pair, double theta = 0.15);

// Polynomial in the scaled variable (x - center) / scale.
struct LocalPoly {
  double center = 0;
  double scale = 1;
  std::vector<double> c;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
};

// Least-squares polynomial of the given degree through (t, y) samples.
LocalPoly fit_poly(const std::vector<TimedValue>& pts, int degree);

struct CaseAModel {
  PCT pct;
  LocalPoly lower;
  LocalPoly upper;
};
struct CaseBModel {
  PCT pct;
  LocalPoly t_of_y;  // the rotated curve t = p(y)
  double y_min = 0;  // data span in y
  double y_max = 0;
  double t_far = 0;  // furthest sample abscissa used in the fit
};

CaseAModel locate_case_a(const MergingPair& pair, int q, double h);
CaseBModel locate_case_b(const MergingPair& pair, int k, double h);

PCT approx_pct_case_a(const SampledSVF& svf, int strip, int q);
PCT approx_pct_case_b(const SampledSVF& svf, int strip, int k);

// Interpolating spline of degree 1 or 3 (not-a-knot) through (t, y) samples.
// Fewer than four points fall back to the interpolating polynomial.
class TrackSpline {
 public:
  TrackSpline() = default;
  TrackSpline(const std::vector<TimedValue>& pts, int degree);

  double operator()(double t) const;
  double derivative(double t) const;

 private:
  int locate(double t) const;

  int degree_ = 3;
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

enum class CurveEnd { DomainEdge, PctA, PctB };

struct BoundaryCurve {
  int first_sample = 0;
  std::vector<TimedValue> samples;
  bool lower = true;
  CurveEnd start = CurveEnd::DomainEdge;
  CurveEnd end = CurveEnd::DomainEdge;
  int start_pct = -1;
  int end_pct = -1;
  bool reliable = true;
  TrackSpline spline;

  int last_sample() const { return first_sample + static_cast<int>(samples.size()) - 1; }
};

struct PctRecord {
  PCT pct;
  int lower_curve = -1;
  int upper_curve = -1;
  bool gap_right = true;
  bool reliable = true;
  std::string failure;  // error code name when the local model failed
  std::optional<CaseAModel> case_a;
  std::optional<CaseBModel> case_b;
};

struct Svf1dDiagnostics {
  int reliable_curves = 0;
  int unreliable_curves = 0;
  int failed_pcts = 0;
};

class SVF1DApproximant {
 public:
  const std::vector<BoundaryCurve>& curves() const { return curves_; }
  const std::vector<PctRecord>& pcts() const { return pcts_; }
  const SampledSVF& source() const { return source_; }
  const Svf1dConfig& config() const { return config_; }
  Svf1dDiagnostics diagnostics() const;

  // Curve value at t, if the curve is reliable and alive at t.
  std::optional<double> curve_value(int curve, double t) const;
  // d y / d t along the curve; nullopt where the curve is not alive or the
  // tangent is vertical.
  std::optional<double> curve_slope(int curve, double t) const;
  std::pair<double, double> curve_span(int curve) const;

  // Unrounded evaluation without the sample shortcut or complement retry.
  IntervalUnion evaluate_curves(double t) const;

 private:
  friend SVF1DApproximant build_approximant(const SampledSVF& svf, const Svf1dConfig& cfg);
  static SVF1DApproximant build(const SampledSVF& svf, const Svf1dConfig& cfg, bool with_complement);
  friend IntervalUnion evaluate(const SVF1DApproximant& approx, double t);

  SampledSVF source_;
  Svf1dConfig config_;
  std::vector<BoundaryCurve> curves_;
  std::vector<PctRecord> pcts_;
  std::shared_ptr<const SVF1DApproximant> complement_;
};

SVF1DApproximant build_approximant(const SampledSVF& svf, const Svf1dConfig& cfg = {});

// F~(t). Returns the sample itself at sample abscissae. On an odd number of
// crossings retries on the complement; throws InconsistentParity if both fail.
IntervalUnion evaluate(const SVF1DApproximant& approx, double t);

SampledSVF complement(const SampledSVF& svf);

}  // namespace svf

// SPDX-License-Identifier: Apache-2.0
#include "svf/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "svf/error.hpp"

namespace svf {

namespace {

void require_dim(const Phantom& ph, bool ok, std::string_view pipeline) {
  if (!ok)
    fail(ErrorCode::DimensionMismatch,
         "pipeline " + std::string(pipeline) + " does not support d = " + std::to_string(ph.d));
}

SampledSVF sample(const Phantom& ph, int N, const ConvergenceOptions& opt) {
  return ph.d == 1 ? sample_phantom(ph, N) : sample_phantom(ph, N, opt.ratio * N + 1);
}

}  // namespace

Pipeline parse_pipeline(std::string_view name) {
  if (name == "svf1d") return Pipeline::Svf1d;
  if (name == "two-stage") return Pipeline::TwoStage;
  if (name == "implicit") return Pipeline::Implicit;
  if (name == "metricavg") return Pipeline::MetricAverage;
  fail(ErrorCode::InvalidArgument, "unknown pipeline " + std::string(name));
}

std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Svf1d: return "svf1d";
    case Pipeline::TwoStage: return "two-stage";
    case Pipeline::Implicit: return "implicit";
    case Pipeline::MetricAverage: return "metricavg";
  }
  return "?";
}

double reconstruction_error(const Phantom& ph, int N, Pipeline pipeline, const ConvergenceOptions& opt) {
  double sup = 0;
  switch (pipeline) {
    case Pipeline::Svf1d: {
      require_dim(ph, ph.d == 1, "svf1d");
      const auto ap = build_approximant(sample_phantom(ph, N), opt.reconstruct.svf1d);
      return measure_error(ph, ap, opt.ts).sup;
    }
    case Pipeline::TwoStage: {
      require_dim(ph, ph.d == 2, "two-stage");
      const TwoStage st(sample(ph, N, opt), opt.reconstruct.svf1d);
      const int cells = opt.cells > 0 ? opt.cells : 400;
      for (double t : opt.ts) {
        const ScalarField f = [&](std::span<const double> x) { return ph.level_at(t, x); };
        sup = std::max(sup, contour_hausdorff(st.evaluate(t).boundary(3000), f, cells));
      }
      return sup;
    }
    case Pipeline::Implicit: {
      const auto ga = build_graph_approximant(sample(ph, N, opt), opt.reconstruct);
      const ScalarField S = [&](std::span<const double> p) { return ga.S(p); };
      if (opt.measure == Measure::Graph)
        return zero_set_hausdorff(ph.level, S, ph.d + 1, opt.cells > 0 ? opt.cells : (ph.d <= 2 ? 96 : 40));
      return measure_error(ph, S, opt.ts, opt.cells).sup;
    }
    case Pipeline::MetricAverage: {
      require_dim(ph, ph.d == 2, "metricavg");
      const auto g = build_graph_by_metric_average(sample(ph, N, opt), opt.metric);
      const int n = g.resolution();
      for (double t : opt.ts) {
        const GridSet want = GridSet::sample(2, n, [&](std::span<const double> x) { return ph.level_at(t, x); });
        const PointCloud a = in_set_nodes(g.evaluate(t), n), b = in_set_nodes(want, n);
        if (a.empty() != b.empty()) return std::numeric_limits<double>::infinity();
        if (!a.empty()) sup = std::max(sup, hausdorff_points(a, b));
      }
      return sup;
    }
  }
  return sup;
}

ConvergenceTable run_convergence(const Phantom& ph, std::span<const int> Ns, Pipeline pipeline,
                                 const ConvergenceOptions& opt) {
  if (Ns.empty()) fail(ErrorCode::InvalidArgument, "empty N list");
  ConvergenceTable table;
  table.phantom = ph.name;
  table.d = ph.d;
  table.pipeline = pipeline;
  std::vector<double> errs;
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    if (Ns[k] < 2 || (k > 0 && Ns[k] <= Ns[k - 1]))
      fail(ErrorCode::InvalidArgument, "N list must be increasing and >= 2");
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.N = Ns[k];
    row.error = reconstruction_error(ph, Ns[k], pipeline, opt);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (k > 0)
      row.order = std::log(table.rows.back().error / row.error) / std::log(static_cast<double>(Ns[k]) / Ns[k - 1]);
    table.rows.push_back(row);
    errs.push_back(row.error);
  }
  if (Ns.size() > 1) table.slope = convergence_slope(Ns, errs);
  return table;
}

}  // namespace svf

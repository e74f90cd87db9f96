// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svf/metric_average.hpp"
#include "svf/phantoms.hpp"
#include "svf/reconstruct.hpp"

namespace svf {

enum class Pipeline { Svf1d, TwoStage, Implicit, MetricAverage };

// "svf1d", "two-stage", "implicit", "metricavg". Throws InvalidArgument.
Pipeline parse_pipeline(std::string_view name);
std::string_view to_string(Pipeline p);

enum class Measure { Slices, Graph };

struct ConvergenceOptions {
  std::vector<double> ts = {0.3137, 0.4021, 0.4688, 0.5573, 0.6419};
  int ratio = 2;        // grid samples have ratio * N + 1 nodes per axis
  Measure measure = Measure::Slices;  // implicit pipeline: per-t slices or the whole graph boundary
  int cells = 0;        // Hausdorff lattice; 0 picks a per-pipeline default
  ReconstructConfig reconstruct;
  MetricGraphConfig metric;
};

struct ConvergenceRow {
  int N = 0;
  double error = 0;  // sup over the t list (or the graph Hausdorff distance)
  double order = 0;  // log2(err(previous N) / err(N)) scaled by the N ratio; 0 on the first row
  double seconds = 0;
};

struct ConvergenceTable {
  std::string phantom;
  int d = 0;
  Pipeline pipeline = Pipeline::Implicit;
  std::vector<ConvergenceRow> rows;
  double slope = 0;  // least-squares slope over all rows
};

// Error of one reconstruction at sampling N.
double reconstruction_error(const Phantom& ph, int N, Pipeline pipeline, const ConvergenceOptions& opt);

ConvergenceTable run_convergence(const Phantom& ph, std::span<const int> Ns, Pipeline pipeline,
                                 const ConvergenceOptions& opt = {});

}  // namespace svf

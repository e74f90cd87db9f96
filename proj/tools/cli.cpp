// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "svf/convergence.hpp"
#include "svf/error.hpp"
#include "svf/io.hpp"
#include "svf/marching.hpp"
#include "svf/metric_average.hpp"
#include "svf/phantoms.hpp"
#include "svf/reconstruct.hpp"

namespace svf {

namespace {

using nlohmann::json;

constexpr int kNumericalFailure = 1;
constexpr int kUsageError = 2;

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path == "-")
    out << text;
  else
    write_text_file(path, text);
}

bool usage_code(ErrorCode c) {
  return c == ErrorCode::ParseError || c == ErrorCode::DimensionMismatch || c == ErrorCode::InvalidArgument ||
         c == ErrorCode::OutOfDomain;
}

void error_json(std::ostream& err, std::string_view code, const std::string& message, int exit_code) {
  err << json{{"error", code}, {"message", message}, {"exit_code", exit_code}}.dump() << '\n';
}

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "bad coordinate '" + item + "' in --point");
    }
  }
  return out;
}

json interval_json(const IntervalUnion& u) {
  json a = json::array();
  for (const auto& iv : u.intervals()) a.push_back({iv.lo, iv.hi});
  return a;
}

struct ReconstructFlags {
  ReconstructConfig cfg;
  bool x1_only = false;

  void attach(CLI::App* app) {
    app->add_option("--m", cfg.m, "spline degree")->capture_default_str()->check(CLI::Range(2, 5));
    app->add_option("--rho-factor", cfg.rho_factor, "MLS support radius in units of h")->capture_default_str();
    app->add_option("--s-target", cfg.s_target, "target order of the point data")->capture_default_str();
    app->add_option("--sign-sweeps", cfg.sign_sweeps, "residual sweeps against sign errors")->capture_default_str();
    app->add_flag("--x1-lines-only", x1_only, "line sections along x_1 only");
    attach_svf1d(app, cfg.svf1d);
  }

  static void attach_svf1d(CLI::App* app, Svf1dConfig& c) {
    app->add_option("--q", c.q, "Case A polynomial degree")->capture_default_str();
    app->add_option("--k", c.k, "Case B order parameter")->capture_default_str();
    app->add_option("--p-spline", c.p_spline, "boundary spline degree (1 or 3)")->capture_default_str();
    app->add_option("--theta", c.theta, "Case A/B slope threshold")->capture_default_str();
  }

  ReconstructConfig get() const {
    ReconstructConfig c = cfg;
    c.q1_all_axes = !x1_only;
    return c;
  }
};

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reconstruction of set-valued functions from samples", "svf"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "sample a phantom to a sample file");
  std::string phantom;
  int d = 2, N = 16, n_per_axis = 0;
  std::string output = "-";
  sample->add_option("--phantom", phantom, "phantom name")->required();
  sample->add_option("--d", d, "image dimension")->capture_default_str()->check(CLI::Range(1, 3));
  sample->add_option("--N", N, "number of intervals in t")->required()->check(CLI::Range(1, 4096));
  sample->add_option("--n-per-axis", n_per_axis, "grid nodes per axis (0: N + 1)")->capture_default_str();
  sample->add_option("-o,--output", output, "output path, - for stdout")->capture_default_str();

  // reconstruct
  auto* reconstruct = app.add_subcommand("reconstruct", "build the implicit graph approximant");
  std::string input;
  ReconstructFlags rflags;
  reconstruct->add_option("input", input, "sample file")->required();
  reconstruct->add_option("-o,--output", output, "archive path, - for stdout")->capture_default_str();
  rflags.attach(reconstruct);

  // query
  auto* query = app.add_subcommand("query", "evaluate an archive");
  double t = 0;
  std::string point;
  int raster = 0, mesh_cells = -1;
  query->add_option("archive", input, "archive file")->required();
  query->add_option("--t", t, "parameter value")->required();
  auto* opt_point = query->add_option("--point", point, "comma separated x for an inclusion test");
  auto* opt_raster = query->add_option("--raster", raster, "S(t, .) on n nodes per axis");
  auto* opt_mesh = query->add_option("--mesh", mesh_cells, "zero level of S(t, .) as OBJ (0: default cells)");
  opt_point->excludes(opt_raster)->excludes(opt_mesh);
  opt_raster->excludes(opt_mesh);
  query->add_option("-o,--output", output, "output path, - for stdout")->capture_default_str();

  // metricavg
  auto* metricavg = app.add_subcommand("metricavg", "metric average of two samples");
  int i0 = 0, i1 = 1, resolution = 0;
  double w = 0.5;
  metricavg->add_option("input", input, "sample file")->required();
  metricavg->add_option("--i", i0, "first sample index")->required();
  metricavg->add_option("--j", i1, "second sample index")->required();
  metricavg->add_option("--w", w, "weight of the second sample")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  metricavg->add_option("--resolution", resolution, "raster nodes per axis (0: sample resolution)");
  metricavg->add_option("-o,--output", output, "output path, - for stdout")->capture_default_str();

  // convergence
  auto* convergence = app.add_subcommand("convergence", "error table over a list of N");
  std::vector<int> Ns;
  std::vector<double> ts;
  std::string pipeline = "implicit", measure = "slices";
  ConvergenceOptions copt;
  bool as_json = false;
  convergence->add_option("--phantom", phantom, "phantom name")->required();
  convergence->add_option("--d", d, "image dimension")->capture_default_str()->check(CLI::Range(1, 3));
  convergence->add_option("--N", Ns, "comma separated N list")->required()->delimiter(',');
  convergence->add_option("--pipeline", pipeline, "svf1d, two-stage, implicit or metricavg")
      ->capture_default_str()
      ->check(CLI::IsMember({"svf1d", "two-stage", "implicit", "metricavg"}));
  convergence->add_option("--t", ts, "comma separated t list")->delimiter(',');
  convergence->add_option("--ratio", copt.ratio, "grid nodes per axis are ratio * N + 1")->capture_default_str();
  convergence->add_option("--measure", measure, "implicit pipeline: slices or graph")
      ->capture_default_str()
      ->check(CLI::IsMember({"slices", "graph"}));
  convergence->add_option("--cells", copt.cells, "Hausdorff lattice cells (0: default)");
  convergence->add_option("--resolution", copt.metric.resolution, "metricavg raster nodes per axis")
      ->capture_default_str();
  convergence->add_option("--s", copt.metric.s, "metricavg tau spacing exponent")->capture_default_str();
  convergence->add_flag("--json", as_json, "JSON output");
  ReconstructFlags cflags;
  cflags.attach(convergence);

  // export
  auto* exporter = app.add_subcommand("export", "points or meshes from an archive");
  std::string points;
  bool mesh = false;
  double slice_t = -1;
  int cells = 0;
  exporter->add_option("archive", input, "archive file")->required();
  auto* opt_points = exporter->add_option("--points", points, "q0, q1 or all")->check(CLI::IsMember({"q0", "q1", "all"}));
  auto* opt_emesh = exporter->add_flag("--mesh", mesh, "zero level of S as OBJ");
  opt_points->excludes(opt_emesh);
  exporter->add_option("--t", slice_t, "slice at t instead of the whole graph");
  exporter->add_option("--cells", cells, "marching cells per axis (0: default)");
  exporter->add_option("-o,--output", output, "output path, - for stdout")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_json(err, "UsageError", e.what(), kUsageError);
    return kUsageError;
  }

  try {
    if (sample->parsed()) {
      const Phantom ph = make_phantom(phantom, d);
      emit(out, output, samples_to_json(sample_phantom(ph, N, n_per_axis), ph.name));
    } else if (reconstruct->parsed()) {
      const GraphApproximant ga = build_graph_approximant(load_samples(input), rflags.get());
      emit(out, output, archive_to_json(ga));
    } else if (query->parsed()) {
      const GraphApproximant ga = load_archive(input);
      if (!(t >= 0 && t <= 1)) fail(ErrorCode::OutOfDomain, "t outside [0, 1]");
      if (opt_point->count()) {
        const auto x = parse_point(point);
        const bool inside = inclusion(ga, t, x);
        std::vector<double> p{t};
        p.insert(p.end(), x.begin(), x.end());
        emit(out, output, json{{"t", t}, {"point", x}, {"inside", inside}, {"value", ga.S(p)}}.dump() + "\n");
      } else if (opt_raster->count()) {
        if (raster < 2) fail(ErrorCode::InvalidArgument, "--raster needs at least 2 nodes");
        const GridSet g = evaluate_set(ga, t, raster);
        emit(out, output, json{{"t", t}, {"d", ga.d}, {"n", g.n()}, {"values", g.values()}}.dump(1) + "\n");
      } else if (opt_mesh->count()) {
        if (ga.d < 2) fail(ErrorCode::DimensionMismatch, "slice meshes need d >= 2");
        std::ostringstream os;
        std::visit([&](const auto& m) { write_obj(os, m); }, extract_slice(ga, t, std::max(mesh_cells, 0)));
        emit(out, output, os.str());
      } else {
        fail(ErrorCode::InvalidArgument, "query needs one of --point, --raster, --mesh");
      }
    } else if (metricavg->parsed()) {
      const SampledSVF svf = load_samples(input);
      if (i0 < 0 || i1 < 0 || i0 > svf.N() || i1 > svf.N()) fail(ErrorCode::OutOfDomain, "sample index out of range");
      json res = {{"i", i0}, {"j", i1}, {"w", w}, {"d", svf.dim()}};
      if (svf.dim() == 1) {
        res["intervals"] = interval_json(metric_average_1d(svf.interval(i0), svf.interval(i1), w));
      } else {
        const GridSet g = metric_average_grid(svf.grid(i0), svf.grid(i1), w, resolution);
        res["n"] = g.n();
        res["values"] = g.values();
      }
      emit(out, output, res.dump(1) + "\n");
    } else if (convergence->parsed()) {
      const Phantom ph = make_phantom(phantom, d);
      copt.reconstruct = cflags.get();
      copt.metric.svf1d = copt.reconstruct.svf1d;
      copt.measure = measure == "graph" ? Measure::Graph : Measure::Slices;
      if (!ts.empty()) copt.ts = ts;
      const auto table = run_convergence(ph, Ns, parse_pipeline(pipeline), copt);
      std::ostringstream os;
      if (as_json) {
        json rows = json::array();
        for (const auto& r : table.rows) rows.push_back({{"N", r.N}, {"error", r.error}, {"order", r.order}});
        os << json{{"phantom", table.phantom}, {"d", table.d}, {"pipeline", to_string(table.pipeline)},
                   {"rows", rows}, {"slope", table.slope}}
                  .dump(1)
           << '\n';
      } else {
        os << "phantom " << table.phantom << "  d " << table.d << "  pipeline " << to_string(table.pipeline) << '\n';
        os << std::setw(6) << "N" << std::setw(14) << "error" << std::setw(9) << "order" << std::setw(10) << "seconds"
           << '\n';
        for (std::size_t k = 0; k < table.rows.size(); ++k) {
          const auto& r = table.rows[k];
          os << std::setw(6) << r.N << std::setw(14) << std::scientific << std::setprecision(4) << r.error;
          if (k == 0)
            os << std::setw(9) << "-";
          else
            os << std::setw(9) << std::fixed << std::setprecision(2) << r.order;
          os << std::setw(10) << std::fixed << std::setprecision(2) << r.seconds << '\n';
        }
        os << "slope " << std::fixed << std::setprecision(3) << table.slope << '\n';
      }
      emit(out, "-", os.str());
    } else if (exporter->parsed()) {
      const GraphApproximant ga = load_archive(input);
      std::ostringstream os;
      if (opt_points->count()) {
        PointCloud c = points == "q1" ? ga.q1 : ga.q0;
        if (points == "all") c.append(ga.q1);
        write_points(os, c);
      } else if (mesh) {
        if (slice_t >= 0) {
          if (slice_t > 1) fail(ErrorCode::OutOfDomain, "t outside [0, 1]");
          if (ga.d < 2) fail(ErrorCode::DimensionMismatch, "slice meshes need d >= 2");
          std::visit([&](const auto& m) { write_obj(os, m); }, extract_slice(ga, slice_t, cells));
        } else {
          if (ga.d + 1 > 3) fail(ErrorCode::DimensionMismatch, "whole-graph meshes need d <= 2; pass --t");
          std::visit([&](const auto& m) { write_obj(os, m); }, zero_level_extract(ga.S, {}, cells));
        }
      } else {
        fail(ErrorCode::InvalidArgument, "export needs --points or --mesh");
      }
      emit(out, output, os.str());
    }
  } catch (const Error& e) {
    const int code = usage_code(e.code()) ? kUsageError : kNumericalFailure;
    error_json(err, to_string(e.code()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    error_json(err, "InternalError", e.what(), kNumericalFailure);
    return kNumericalFailure;
  }
  return 0;
}

}  // namespace svf

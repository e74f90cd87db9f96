// SPDX-License-Identifier: Apache-2.0
#include "svf/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <json.hpp>

#include "svf/error.hpp"

namespace svf {

using nlohmann::json;

namespace {

constexpr const char* kSamplesFormat = "svf-samples";
constexpr const char* kArchiveFormat = "svf-archive";

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::ParseError, path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(path + "." + key, "missing field");
  return *it;
}

long long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer");
  return v.get<long long>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) parse_fail(path, "expected a number");
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) parse_fail(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) parse_fail(path, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) parse_fail(path, "expected an array");
  return v;
}

int int_field(const json& j, const char* key, const std::string& path, long long lo, long long hi) {
  const std::string p = path + "." + key;
  const long long v = as_int(member(j, key, path), p);
  if (v < lo || v > hi) parse_fail(p, "value " + std::to_string(v) + " out of range");
  return static_cast<int>(v);
}

double double_field(const json& j, const char* key, const std::string& path) {
  return as_double(member(j, key, path), path + "." + key);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::ParseError,
         "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

void check_header(const json& root, const char* format) {
  const std::string f = as_string(member(root, "format", "$"), "$.format");
  if (f != format) parse_fail("$.format", "expected \"" + std::string(format) + "\", found \"" + f + "\"");
  const int v = int_field(root, "version", "$", 0, 1 << 30);
  if (v != kFileVersion) parse_fail("$.version", "unsupported version " + std::to_string(v));
}

std::string encode_doubles(std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * sizeof(double));
  for (std::size_t k = 0; k < values.size(); ++k) {
    auto bits = std::bit_cast<std::uint64_t>(values[k]);
    for (int b = 0; b < 8; ++b) bytes[8 * k + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  return base64_encode(bytes);
}

std::vector<double> decode_doubles(const json& v, const std::string& path) {
  std::vector<unsigned char> bytes;
  try {
    bytes = base64_decode(as_string(v, path));
  } catch (const Error& e) {
    parse_fail(path, e.what());
  }
  if (bytes.size() % 8 != 0) parse_fail(path, "byte count is not a multiple of 8");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[8 * k + b]) << (8 * b);
    out[k] = std::bit_cast<double>(bits);
  }
  return out;
}

json cloud_to_json(const PointCloud& c) {
  std::vector<unsigned char> tags(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) tags[k] = static_cast<unsigned char>(c.tag(k));
  return {{"dim", c.dim()}, {"count", c.size()}, {"coords", encode_doubles(c.coords())},
          {"tags", base64_encode(tags)}};
}

PointCloud cloud_from_json(const json& j, const std::string& path) {
  const int dim = int_field(j, "dim", path, 1, 16);
  const long long count = as_int(member(j, "count", path), path + ".count");
  const auto coords = decode_doubles(member(j, "coords", path), path + ".coords");
  std::vector<unsigned char> tags;
  try {
    tags = base64_decode(as_string(member(j, "tags", path), path + ".tags"));
  } catch (const Error& e) {
    parse_fail(path + ".tags", e.what());
  }
  if (count < 0 || coords.size() != static_cast<std::size_t>(count) * dim ||
      tags.size() != static_cast<std::size_t>(count))
    fail(ErrorCode::DimensionMismatch, path + ": array sizes do not match count " + std::to_string(count));
  PointCloud c(dim);
  for (std::size_t k = 0; k < tags.size(); ++k) {
    if (tags[k] > static_cast<unsigned char>(PointSource::Other)) parse_fail(path + ".tags", "unknown tag");
    c.add(std::span<const double>(coords.data() + k * dim, dim), static_cast<PointSource>(tags[k]));
  }
  return c;
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  namespace it = boost::archive::iterators;
  using Enc = it::base64_from_binary<it::transform_width<const unsigned char*, 6, 8>>;
  std::string out(Enc(bytes.data()), Enc(bytes.data() + bytes.size()));
  out.append((3 - bytes.size() % 3) % 3, '=');
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  namespace it = boost::archive::iterators;
  using Dec = it::transform_width<it::binary_from_base64<const char*>, 8, 6>;
  std::size_t len = text.size();
  while (len > 0 && text[len - 1] == '=') --len;
  if (text.size() - len > 2 || text.size() % 4 != 0)
    fail(ErrorCode::ParseError, "malformed base64 length");
  try {
    std::vector<unsigned char> out(Dec(text.data()), Dec(text.data() + len));
    out.resize(len * 6 / 8);
    return out;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "invalid base64 character");
  }
}

std::string samples_to_json(const SampledSVF& svf, std::string_view phantom) {
  json root = {{"format", kSamplesFormat}, {"version", kFileVersion}, {"d", svf.dim()}, {"N", svf.N()}};
  if (!phantom.empty()) root["phantom"] = std::string(phantom);
  json samples = json::array();
  if (svf.kind() == SampleKind::Intervals) {
    for (const auto& s : svf.intervals()) {
      json iv = json::array();
      for (const auto& i : s.intervals()) iv.push_back({i.lo, i.hi});
      samples.push_back(std::move(iv));
    }
  } else {
    root["n_per_axis"] = svf.n_per_axis();
    for (const auto& g : svf.grids()) samples.push_back(g.values());
  }
  root["samples"] = std::move(samples);
  return root.dump(1) + "\n";
}

SampledSVF samples_from_json(std::string_view text) {
  const json root = parse_text(text);
  check_header(root, kSamplesFormat);
  const int d = int_field(root, "d", "$", 1, 8);
  const int N = int_field(root, "N", "$", 1, 1 << 20);
  const json& samples = as_array(member(root, "samples", "$"), "$.samples");
  if (samples.size() != static_cast<std::size_t>(N) + 1)
    fail(ErrorCode::DimensionMismatch, "$.samples: expected " + std::to_string(N + 1) + " samples, found " +
                                           std::to_string(samples.size()));
  if (d == 1) {
    std::vector<IntervalUnion> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::string p = "$.samples[" + std::to_string(i) + "]";
      std::vector<Interval> iv;
      const json& s = as_array(samples[i], p);
      for (std::size_t k = 0; k < s.size(); ++k) {
        const std::string q = p + "[" + std::to_string(k) + "]";
        const json& pair = as_array(s[k], q);
        if (pair.size() != 2) fail(ErrorCode::DimensionMismatch, q + ": expected [lo, hi]");
        const double lo = as_double(pair[0], q + "[0]"), hi = as_double(pair[1], q + "[1]");
        if (!(lo <= hi)) parse_fail(q, "lo > hi");
        iv.push_back({lo, hi});
      }
      out.emplace_back(std::move(iv));
    }
    return SampledSVF::from_intervals(std::move(out));
  }
  const int n = int_field(root, "n_per_axis", "$", 2, 1 << 16);
  std::size_t expected = 1;
  for (int a = 0; a < d; ++a) expected *= static_cast<std::size_t>(n);
  std::vector<GridSet> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string p = "$.samples[" + std::to_string(i) + "]";
    const json& s = as_array(samples[i], p);
    if (s.size() != expected)
      fail(ErrorCode::DimensionMismatch,
           p + ": expected " + std::to_string(expected) + " values, found " + std::to_string(s.size()));
    std::vector<double> values(expected);
    for (std::size_t k = 0; k < expected; ++k) values[k] = as_double(s[k], p + "[" + std::to_string(k) + "]");
    out.emplace_back(d, n, std::move(values));
  }
  return SampledSVF::from_grids(std::move(out));
}

void save_samples(const SampledSVF& svf, const std::string& path, std::string_view phantom) {
  write_text_file(path, samples_to_json(svf, phantom));
}

SampledSVF load_samples(const std::string& path) { return samples_from_json(read_text_file(path)); }

std::string archive_to_json(const GraphApproximant& ga) {
  const auto& c = ga.config;
  const auto& dg = ga.diagnostics;
  json sections = json::array();
  for (const auto& s : dg.sections)
    sections.push_back({{"axis", s.axis},
                        {"line", s.line},
                        {"built", s.built},
                        {"failure", s.failure},
                        {"reliable_curves", s.reliable_curves},
                        {"unreliable_curves", s.unreliable_curves},
                        {"failed_pcts", s.failed_pcts}});
  json root = {
      {"format", kArchiveFormat},
      {"version", kFileVersion},
      {"d", ga.d},
      {"config",
       {{"m", c.m},
        {"rho_factor", c.rho_factor},
        {"s_target", c.s_target},
        {"q1_all_axes", c.q1_all_axes},
        {"sign_sweeps", c.sign_sweeps},
        {"svf1d", {{"q", c.svf1d.q}, {"k", c.svf1d.k}, {"p_spline", c.svf1d.p_spline}, {"theta", c.svf1d.theta}}}}},
      {"spline",
       {{"degree", ga.S.degree()},
        {"dim", ga.S.dim()},
        {"N", ga.S.N()},
        {"coefficients", encode_doubles(ga.S.coefficients())}}},
      {"q0", cloud_to_json(ga.q0)},
      {"q1", cloud_to_json(ga.q1)},
      {"diagnostics",
       {{"q0_points", dg.q0_points},
        {"q1_points", dg.q1_points},
        {"far_nodes", dg.far_nodes},
        {"mls_fallbacks", dg.mls_fallbacks},
        {"sign_sweeps", dg.sign_sweeps},
        {"sign_mismatches", dg.sign_mismatches},
        {"skipped_sections", dg.skipped_sections()},
        {"reliable_curves", dg.reliable_curves()},
        {"unreliable_curves", dg.unreliable_curves()},
        {"sections", std::move(sections)}}},
  };
  return root.dump(1) + "\n";
}

GraphApproximant archive_from_json(std::string_view text) {
  const json root = parse_text(text);
  check_header(root, kArchiveFormat);
  GraphApproximant ga;
  ga.d = int_field(root, "d", "$", 1, 7);

  const json& cfg = member(root, "config", "$");
  auto& c = ga.config;
  c.m = int_field(cfg, "m", "$.config", 2, 5);
  c.rho_factor = double_field(cfg, "rho_factor", "$.config");
  c.s_target = int_field(cfg, "s_target", "$.config", 1, 64);
  c.q1_all_axes = as_bool(member(cfg, "q1_all_axes", "$.config"), "$.config.q1_all_axes");
  c.sign_sweeps = int_field(cfg, "sign_sweeps", "$.config", 0, 1 << 20);
  const json& s1 = member(cfg, "svf1d", "$.config");
  c.svf1d.q = int_field(s1, "q", "$.config.svf1d", 1, 16);
  c.svf1d.k = int_field(s1, "k", "$.config.svf1d", 1, 16);
  c.svf1d.p_spline = int_field(s1, "p_spline", "$.config.svf1d", 1, 5);
  c.svf1d.theta = double_field(s1, "theta", "$.config.svf1d");

  const json& sp = member(root, "spline", "$");
  const int dim = int_field(sp, "dim", "$.spline", 1, 8);
  if (dim != ga.d + 1) fail(ErrorCode::DimensionMismatch, "$.spline.dim: expected d + 1");
  ga.S = TensorSpline::from_coefficients(int_field(sp, "degree", "$.spline", 2, 5), dim,
                                         int_field(sp, "N", "$.spline", 1, 1 << 16),
                                         decode_doubles(member(sp, "coefficients", "$.spline"),
                                                        "$.spline.coefficients"));
  ga.q0 = cloud_from_json(member(root, "q0", "$"), "$.q0");
  ga.q1 = cloud_from_json(member(root, "q1", "$"), "$.q1");
  if (ga.q0.dim() != dim || ga.q1.dim() != dim)
    fail(ErrorCode::DimensionMismatch, "point clouds must have dimension d + 1");

  const json& dj = member(root, "diagnostics", "$");
  const std::string dp = "$.diagnostics";
  auto& dg = ga.diagnostics;
  dg.q0_points = static_cast<std::size_t>(as_int(member(dj, "q0_points", dp), dp + ".q0_points"));
  dg.q1_points = static_cast<std::size_t>(as_int(member(dj, "q1_points", dp), dp + ".q1_points"));
  dg.far_nodes = static_cast<std::size_t>(as_int(member(dj, "far_nodes", dp), dp + ".far_nodes"));
  dg.mls_fallbacks = static_cast<std::size_t>(as_int(member(dj, "mls_fallbacks", dp), dp + ".mls_fallbacks"));
  dg.sign_sweeps = int_field(dj, "sign_sweeps", dp, 0, 1 << 20);
  dg.sign_mismatches =
      static_cast<std::size_t>(as_int(member(dj, "sign_mismatches", dp), dp + ".sign_mismatches"));
  const json& secs = as_array(member(dj, "sections", dp), dp + ".sections");
  for (std::size_t k = 0; k < secs.size(); ++k) {
    const std::string p = dp + ".sections[" + std::to_string(k) + "]";
    SectionReport r;
    r.axis = int_field(secs[k], "axis", p, 0, 7);
    for (const auto& v : as_array(member(secs[k], "line", p), p + ".line"))
      r.line.push_back(static_cast<int>(as_int(v, p + ".line")));
    r.built = as_bool(member(secs[k], "built", p), p + ".built");
    r.failure = as_string(member(secs[k], "failure", p), p + ".failure");
    r.reliable_curves = int_field(secs[k], "reliable_curves", p, 0, 1 << 30);
    r.unreliable_curves = int_field(secs[k], "unreliable_curves", p, 0, 1 << 30);
    r.failed_pcts = int_field(secs[k], "failed_pcts", p, 0, 1 << 30);
    dg.sections.push_back(std::move(r));
  }
  return ga;
}

void save_archive(const GraphApproximant& ga, const std::string& path) { write_text_file(path, archive_to_json(ga)); }

GraphApproximant load_archive(const std::string& path) { return archive_from_json(read_text_file(path)); }

void write_points(std::ostream& out, const PointCloud& cloud) {
  out << "# points " << cloud.size() << ' ' << cloud.dim() << '\n';
  out.precision(17);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const auto p = cloud.point(k);
    for (int a = 0; a < cloud.dim(); ++a) out << (a ? " " : "") << p[a];
    out << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::InvalidArgument, "write failed for " + path);
}

}  // namespace svf

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svf/geom.hpp"
#include "svf/reconstruct.hpp"

namespace svf {

inline constexpr int kFileVersion = 1;

// Sample file: JSON with "format": "svf-samples", version, d, N, n_per_axis
// (d >= 2), an optional "phantom" name and one payload per t_i: interval
// pairs for d = 1, row-major node values for d >= 2.
std::string samples_to_json(const SampledSVF& svf, std::string_view phantom = {});
// Throws ParseError (position or field path in the message) and
// DimensionMismatch (payload sizes, sample count).
SampledSVF samples_from_json(std::string_view text);
void save_samples(const SampledSVF& svf, const std::string& path, std::string_view phantom = {});
SampledSVF load_samples(const std::string& path);

// Archive of a GraphApproximant: config, diagnostics, spline coefficients and
// both clouds, arrays as base64 of little-endian binary64.
std::string archive_to_json(const GraphApproximant& ga);
GraphApproximant archive_from_json(std::string_view text);
void save_archive(const GraphApproximant& ga, const std::string& path);
GraphApproximant load_archive(const std::string& path);

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

// One header line "# points <count> <dim>", then one point per line.
void write_points(std::ostream& out, const PointCloud& cloud);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace svf

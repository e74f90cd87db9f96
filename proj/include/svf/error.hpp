// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svf {

enum class ErrorCode {
  EmptySet,
  DegenerateRoot,
  AmbiguousPairing,
  InsufficientSamples,
  NoIntersection,
  NoExtremum,
  InconsistentParity,
  UnsupportedDegree,
  OutOfDomain,
  IncompleteGrid,
  DimensionUnsupported,
  InsufficientNeighbors,
  DegenerateNeighborhood,
  AllCurvesUnreliable,
  DegenerateTangents,
  ParseError,
  DimensionMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; the code is the
// machine-readable part, the message carries context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace svf

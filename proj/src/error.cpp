// SPDX-License-Identifier: Apache-2.0
#include "svf/error.hpp"

namespace svf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DegenerateRoot: return "DegenerateRoot";
    case ErrorCode::AmbiguousPairing: return "AmbiguousPairing";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::NoExtremum: return "NoExtremum";
    case ErrorCode::InconsistentParity: return "InconsistentParity";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::IncompleteGrid: return "IncompleteGrid";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::InsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::AllCurvesUnreliable: return "AllCurvesUnreliable";
    case ErrorCode::DegenerateTangents: return "DegenerateTangents";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace svf

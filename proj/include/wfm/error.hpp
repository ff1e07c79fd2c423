// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wfm {

enum class ErrorKind {
  InvalidArgument,
  NonManifoldMesh,
  GeometryInconsistency,
  DegenerateElement,
  InvalidSplit,
  UnsupportedDegree,
  DimensionMismatch,
  NotPositiveDefinite,
  ProblemTooLarge,
  InsufficientSpectrum,
  ValidationFailed,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception; `kind()` lets callers (the CLI in particular) map
/// failures onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NonManifoldMesh: return "non-manifold-mesh";
    case ErrorKind::GeometryInconsistency: return "geometry-inconsistency";
    case ErrorKind::DegenerateElement: return "degenerate-element";
    case ErrorKind::InvalidSplit: return "invalid-split";
    case ErrorKind::UnsupportedDegree: return "unsupported-degree";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::ProblemTooLarge: return "problem-too-large";
    case ErrorKind::InsufficientSpectrum: return "insufficient-spectrum";
    case ErrorKind::ValidationFailed: return "validation-failed";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace wfm

// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <stdexcept>
#include <string>

namespace linflow {

// Malformed input document or unparseable value.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operands whose sizes cannot be combined.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Request outside the implemented scope, e.g. canonical forms beyond the
// plane.
struct UnsupportedDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An iteration failed to converge or a computed basis is numerically
// unusable at the configured tolerances.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The two operators have matching block structure but every sampled
// intertwiner was numerically singular. Distinct from "not similar".
struct WitnessNotInvertible : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

}  // namespace linflow

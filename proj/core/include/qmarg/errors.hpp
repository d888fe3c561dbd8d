// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qmarg {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem size exceeds the dense-workstation limit (d^N > 4096).
// Oversized inputs are rejected outright, never truncated.
class GuardError : public Error {
 public:
  using Error::Error;
};

// Input violates a structural invariant (non-Hermitian, wrong trace,
// negative eigenvalue beyond tolerance, malformed document, ...).
// The message names the failing quantity.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A stated precondition of an operation does not hold for the given
// arguments (for instance non-overlapping subsets where overlap is required).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The requested marginal data is not representable within tolerance:
// the projection residual stalled above the infeasibility threshold.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The iteration cap was reached before the residual target or the
// infeasibility threshold was met; feasibility is undetermined.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmarg

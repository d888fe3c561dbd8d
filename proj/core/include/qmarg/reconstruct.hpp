// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "qmarg/marginals.hpp"
#include "qmarg/spaces.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

enum class ReconstructionStatus { Unique, Ambiguous, Inconsistent, Degenerate };

std::string to_string(ReconstructionStatus status);

struct ReconstructionResult {
  ReconstructionStatus status = ReconstructionStatus::Inconsistent;
  // Present exactly when status is Unique.
  std::optional<PureState> state;
  // Gauge-fixed null vector (x, x'), first entry 1; empty unless Unique.
  Eigen::VectorXcd phase_solution;
  // Unique: largest entry deviation of the reproduced marginals.
  // Inconsistent via empty nullspace: the smallest singular value.
  // Otherwise 0.
  double residual = 0.0;
  // Shape of the assembled homogeneous system, for the counting check:
  // rows = d^N, cols = rank(rho_J) + rank(rho_J').
  Eigen::Index system_rows = 0;
  Eigen::Index system_cols = 0;
};

// Pure-state reconstruction from two overlapping reduced states whose
// subsets cover all parties.  Writes the state two ways through the
// eigenbases of the given parts and their derived complements, pairs
// eigenvectors by descending eigenvalue, and equates the two expansions
// coefficient-wise in the product basis; the surviving freedom is the
// phase vector, recovered as the nullspace of that homogeneous system.
//
// Verdicts: a near-degenerate positive spectrum of either input defeats
// the eigenvalue pairing (Degenerate); an empty nullspace, a non-unimodular
// single solution, or a solution failing to reproduce the inputs is
// Inconsistent; a nullspace of dimension two or more is Ambiguous.
//
// Throws PreconditionError when the subsets do not overlap, do not cover
// 1..N, are not proper subsets, or the sector is not a full product space;
// ValidationError when the part dimensions do not match the subsets.
ReconstructionResult diosi_reconstruct(const DensityMatrix& rho_J,
                                       const DensityMatrix& rho_Jp,
                                       const Sector& sector,
                                       const IndexSubset& J,
                                       const IndexSubset& Jp,
                                       const Tolerances& tol = default_tolerances());

}  // namespace qmarg

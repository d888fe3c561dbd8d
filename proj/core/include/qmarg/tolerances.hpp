// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace qmarg {

// Numerical knobs shared across the library.  Every solver and certificate
// takes a Tolerances value, so callers can tighten or relax selectively;
// the defaults below are the contract the test suites pin.
struct Tolerances {
  // Hermiticity / unit-norm / unit-trace checks on constructed values.
  double structural = 1e-12;
  // Eigenvalues of a density matrix may dip this far below zero.
  double psd_floor = 1e-10;
  // Relative singular-value cut deciding numerical rank and kernel
  // membership (scaled by the largest singular value).
  double rank_cut = 1e-8;
  // Marginal-vector residual a projection run must reach to count as
  // converged.
  double residual_target = 1e-9;
  // Residual above which a plateaued projection run is declared
  // infeasible rather than merely slow.
  double stall_threshold = 1e-7;
  // Equality / vanishing threshold for face certificates (shared marginals,
  // vanishing transition blocks).
  double certificate = 1e-9;
  // Cosine of the smallest principal angle below which two ranges count
  // as orthogonal.
  double range_orthogonality = 1e-8;
  // Subspace containment and vanishing-block checks in block
  // decompositions.
  double containment = 1e-10;
  // Eigenvalue-gap threshold below which spectra count as degenerate.
  double degeneracy_gap = 1e-8;
  // Schmidt coefficients closer than this are grouped as one plateau.
  double schmidt_group = 1e-10;
  // Deviation from unit modulus allowed for recovered phase factors.
  double unimodularity = 1e-6;
  // Reconstructed states must reproduce their input marginals this well.
  double reproduction = 1e-8;
  // Width of the bottom eigenvalue band treated as a ground space.
  double ground_space = 1e-9;
  // Hard cap on projection iterations per start.
  std::int64_t max_iterations = 100000;
  // Number of independent random starts for face searches.
  int starts = 8;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace qmarg

// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qmarg/marginals.hpp"
#include "qmarg/spaces.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

// Bipartite decomposition psi = sum_t mu_t |left_t> (x) |right_t> across
// (J, J^C), with positive non-increasing coefficients and orthonormal
// factor columns.  Coefficients closer than the grouping tolerance are
// degenerate plateaus; factor vectors within a plateau are an arbitrary
// orthonormal choice, so downstream statements must be group-invariant.
struct SchmidtForm {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXcd left;
  Eigen::MatrixXcd right;

  // Half-open index ranges [first, second) of equal-coefficient plateaus.
  std::vector<std::pair<int, int>> groups(
      double group_tol = default_tolerances().schmidt_group) const;
};

SchmidtForm schmidt_decompose(const PureState& psi, const IndexSubset& J,
                              const Tolerances& tol = default_tolerances());

// Do orthonormal sector vectors share one marginal vector?  `common`
// states that the diagonal marginal vectors agree; `transitions_vanish`
// that every cross transition block is zero.  Both together are exactly
// the condition for every unit vector of the span to have the same
// marginals, in which case `common_value` holds that shared vector.
struct CommonRdmReport {
  bool common = false;
  bool transitions_vanish = false;
  std::optional<MarginalVector> common_value;
  double max_marginal_deviation = 0.0;
  double max_transition_norm = 0.0;
};

CommonRdmReport common_rdm_check(const std::vector<PureState>& vectors, int m,
                                 const Tolerances& tol = default_tolerances());

// Orthogonality of the complement-side ranges of two states that already
// share a marginal on J.  The precondition failure is a distinct status,
// never conflated with a false verdict.
struct StrongOrthReport {
  enum class Status { Holds, Fails, PreconditionViolated };
  Status status;
  double range_cosine = 0.0;   // largest principal-angle cosine
  std::string detail;          // which precondition failed, when violated
};

StrongOrthReport strong_orthogonality_check(
    const PureState& a, const PureState& b, const IndexSubset& J,
    const Tolerances& tol = default_tolerances());

// The set of global states reproducing a marginal vector, described by an
// orthonormal subspace basis G and a relative-interior representative
// whose range spans G.  When both certificates hold, every density
// supported on G maps to the target, so the pre-image is the whole face
// of densities on G.
struct PreimageFace {
  Sector sector;
  MarginalVector target;
  Eigen::MatrixXcd subspace;       // orthonormal columns, sector coords
  DensityMatrix representative;    // range = span(subspace)
  bool common_rdm = false;
  bool transitions_vanish = false;
  double residual = 0.0;           // stacked 2-norm of the marginal defect

  int dimension() const { return static_cast<int>(subspace.cols()); }
};

// Alternating-projection feasibility (Dykstra) between the affine set of
// Hermitian solutions and the positive cone, from several random starts,
// preceded by a support-reduction step: null vectors of the target parts
// pin the support of every solution, which keeps the projection pair
// transversal and the convergence linear.  Throws InfeasibleError when no
// pre-image exists within tolerance and ConvergenceError when the
// iteration budget runs out undecided.
PreimageFace preimage_face(const MarginalVector& target, std::uint64_t seed = 0,
                           const Tolerances& tol = default_tolerances());

enum class Extremality { Extreme, NotExtreme, Undecided };

std::string to_string(Extremality verdict);

// Two distinct marginal vectors averaging to the tested one, plus the
// operator direction that produced them; both re-verified by direct
// partial traces before being returned.
struct ExtremalityWitness {
  MarginalVector plus;
  MarginalVector minus;
  Eigen::MatrixXcd direction;
};

struct ExtremalityVerdict {
  Extremality verdict = Extremality::Undecided;
  int preimage_dimension = 0;  // dim G; 0 when undecided
  std::optional<ExtremalityWitness> witness;
};

// A marginal vector is extreme exactly when its pre-image is a face: the
// face's basis must share the marginals (common_rdm) and have vanishing
// transition blocks.  Failing either certificate yields a constructive
// not_extreme witness; only a failed feasibility run yields undecided.
ExtremalityVerdict is_extreme_marginal(const MarginalVector& target,
                                       std::uint64_t seed = 0,
                                       const Tolerances& tol = default_tolerances());

struct UniquenessReport {
  bool unique = false;
  int preimage_dimension = 0;
  // Whether the uniqueness theorem's hypotheses were verified for this
  // input (2m >= N on an exchange sector, or a complementary pair with
  // both parts pure).  Recorded, never silently assumed.
  bool theorem_applies = false;
};

// Uniqueness of the global pre-image, from a uniform m-body marginal
// vector on an exchange-symmetric sector.  If the hypotheses hold and the
// face is not a single state, an Error is thrown: that combination would
// contradict the uniqueness theorem, so it can only be a library defect.
UniquenessReport unique_preimage_check(const MarginalVector& target,
                                       std::uint64_t seed = 0,
                                       const Tolerances& tol = default_tolerances());

// Same check from a complementary pair (rho_J, rho_{J^C}).
UniquenessReport unique_preimage_check(const Sector& sector,
                                       const IndexSubset& J,
                                       const DensityMatrix& rho_J,
                                       const DensityMatrix& rho_Jc,
                                       std::uint64_t seed = 0,
                                       const Tolerances& tol = default_tolerances());

// Two rank-deficient pre-images of an interior marginal vector, obtained
// by walking the representative along a kernel direction until the
// smallest eigenvalue hits zero on each side.
struct BoundaryPreimages {
  DensityMatrix lower;       // endpoint at mu_minus
  DensityMatrix upper;       // endpoint at mu_plus
  DensityMatrix interior;    // the full-rank representative
  double mu_minus = 0.0;
  double mu_plus = 0.0;
};

BoundaryPreimages boundary_preimages(const MarginalVector& target,
                                     std::uint64_t seed = 0,
                                     const Tolerances& tol = default_tolerances());

}  // namespace qmarg

// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>

#include "qmarg/marginals.hpp"
#include "qmarg/spaces.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

// An m-local Hamiltonian: one Hermitian term V_J on H_J for each listed
// m-subset J of the parties.  The assembled operator is the sector
// compression of sum_J V_J (x) I_{J^C}.
struct LocalHamiltonian {
  Sector sector;
  int locality;
  std::map<IndexSubset, Eigen::MatrixXcd> terms;

  LocalHamiltonian(Sector sector, int locality,
                   std::map<IndexSubset, Eigen::MatrixXcd> terms,
                   const Tolerances& tol = default_tolerances());
};

// The same term V on every m-subset; on exchange sectors this is the
// symmetrized sum that pairs with a single reduced state of all subsets.
LocalHamiltonian uniform_local_hamiltonian(
    const Sector& sector, int locality, const Eigen::MatrixXcd& term,
    const Tolerances& tol = default_tolerances());

// Compressed operator E^dag (sum_J V_J (x) I) E on the sector.
Eigen::MatrixXcd assemble_hamiltonian(const LocalHamiltonian& h);

// Membership of the term tuple in the polar cone of the representable
// marginal set: sum_J Tr(V_J rho_J) >= 0 for every sector density, which
// holds exactly when the assembled Hamiltonian has no eigenvalue below
// -psd_floor.
struct ConeMembership {
  bool member = false;
  double min_eigenvalue = 0.0;
};

ConeMembership polar_cone_membership(const LocalHamiltonian& h,
                                     const Tolerances& tol = default_tolerances());

// Ground space of the assembled Hamiltonian.  Densities supported on it map
// under the contraction to the exposed face of the representable set; when
// the ground space is one-dimensional the face is a single exposed marginal
// vector with that state as its only pre-image.
struct ExposedFace {
  // Orthonormal columns spanning the bottom eigenvalue band.
  Eigen::MatrixXcd ground_space;
  // The minimal eigenvalue; subtracting it shifts the Hamiltonian into the
  // polar cone.
  double ground_energy = 0.0;
  // Present exactly when the ground space is one-dimensional.
  std::optional<MarginalVector> exposed_point;

  int dimension() const { return static_cast<int>(ground_space.cols()); }
};

ExposedFace exposed_face(const LocalHamiltonian& h,
                         const Tolerances& tol = default_tolerances());

// Blocks of a Hamiltonian pair in an orthonormal basis adapted to
// B (+) (A cap B^perp) (+) A^perp, where A is the kernel of the first
// (exposing) Hamiltonian and B the subspace whose marginals the second one
// annihilates.  The first Hamiltonian contributes only its A^perp block
// X33; of the second, the stored blocks are Y13, Y22, Y23, Y33 and the
// derived adjoints -- its B-diagonal and B-to-(A cap B^perp) blocks must
// vanish, which block_decompose enforces.
struct BlockDecomposition {
  // dim B, dim (A cap B^perp), dim A^perp.
  std::array<int, 3> dims{0, 0, 0};
  // Columns: the adapted orthonormal basis, in block order.
  Eigen::MatrixXcd basis;
  Eigen::MatrixXcd x33;
  Eigen::MatrixXcd y13;
  Eigen::MatrixXcd y22;
  Eigen::MatrixXcd y23;
  Eigen::MatrixXcd y33;

  Eigen::MatrixXcd y31() const { return y13.adjoint(); }
  Eigen::MatrixXcd y32() const { return y23.adjoint(); }

  // Reassembled operators in the original coordinates.
  Eigen::MatrixXcd assemble_v() const;
  Eigen::MatrixXcd assemble_w() const;
  // t * assemble_v() + assemble_w().
  Eigen::MatrixXcd shifted(double t) const;
};

// Decompose the pair (h_v, h_w) along the subspaces a (kernel of h_v) and
// b, given as matrices whose columns span them.  Rejects pairs that do not
// fit the displayed block pattern: b not contained in a, h_v not vanishing
// on a, or h_w with nonzero B-diagonal or B-to-inner coupling blocks.
BlockDecomposition block_decompose(const Eigen::MatrixXcd& h_v,
                                   const Eigen::MatrixXcd& h_w,
                                   const Eigen::MatrixXcd& a,
                                   const Eigen::MatrixXcd& b,
                                   const Tolerances& tol = default_tolerances());

// The corner block Y13 decides whether any shift t * H_V + H_W can be PSD:
// a nonzero Y13 sits against a zero diagonal block, so no t > 0 repairs
// positivity.  Equivalently, blocked means B is not inside ker H_W.
struct ObstructionReport {
  double norm_y13 = 0.0;
  bool blocked = false;
};

ObstructionReport y13_obstruction(const BlockDecomposition& d,
                                  const Tolerances& tol = default_tolerances());

// Result of a shift computation; `value` is meaningful only when
// `attainable` is true (Y13 vanished within tolerance).
struct ShiftResult {
  bool attainable = false;
  double value = 0.0;
};

// Smallest t >= 0 making t * H_V + H_W positive semidefinite, from the
// Schur-complement criterion
//   Y23^dag Y22^{-1} Y23 <= t X33 + Y33
// as max(0, lambda_max(X33^{-1/2} (Y23^dag Y22^{-1} Y23 - Y33) X33^{-1/2})).
// Requires X33 and Y22 positive definite.
ShiftResult minimal_shift(const BlockDecomposition& d,
                          const Tolerances& tol = default_tolerances());

// Closed-form shift bound t = (|Y23|^2 - mu * |Y33|) / (mu * lambda) with
// mu = lambda_min(Y22), lambda = lambda_min(X33) and operator norms.  The
// bound is sufficient when Y33 is a nonnegative multiple of the identity;
// outside that regime it can undershoot minimal_shift and is reported
// as-is.
ShiftResult sufficient_shift(const BlockDecomposition& d,
                             const Tolerances& tol = default_tolerances());

// Block-level instance satisfying the exposure hypotheses (X33, Y22
// positive definite, vanishing B-blocks of H_W) yet with Y13 = 2 != 0: the
// shifted pair stays indefinite for every t, exhibiting that exposedness
// does not transfer without B inside ker H_W.
BlockDecomposition glitch_fixture();

// A pair of genuine 1-local Hamiltonians on two qubits whose block
// decomposition has Y13 = 0; minimal_shift is 0.5 while the closed-form
// bound evaluates to -0.5 (its Y33 block is not isotropic, so the bound
// does not apply).
struct ShiftPipelineFixture {
  Sector sector;
  LocalHamiltonian v;
  LocalHamiltonian w;
  // Column spans: a = ker H_V, b = the ground line of H_W inside a.
  Eigen::MatrixXcd subspace_a;
  Eigen::MatrixXcd subspace_b;
};

ShiftPipelineFixture shift_pipeline_fixture();

}  // namespace qmarg

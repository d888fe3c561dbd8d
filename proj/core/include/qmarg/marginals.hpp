// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qmarg/spaces.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

// Sorted set of 1-based particle positions.
struct IndexSubset {
  std::vector<int> indices;

  IndexSubset() = default;
  // Validates: non-empty, strictly increasing, positive.
  explicit IndexSubset(std::vector<int> indices);

  int size() const { return static_cast<int>(indices.size()); }
  IndexSubset complement(int N) const;
  bool contains(int p) const;
  // Comma-joined text form, e.g. "1,3".
  std::string key() const;

  auto operator<=>(const IndexSubset&) const = default;
};

// All m-element subsets of {1..N} in lexicographic order.
std::vector<IndexSubset> all_subsets(int N, int m);

// Hermitian, unit-trace, positive semidefinite matrix (within tolerances).
// Violations are reported as errors naming the failing quantity.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries,
                         const Tolerances& tol = default_tolerances());

  int dimension() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

// Matrix view of an ambient vector split across the subset J: rows are
// indexed by the word on the J factors (ascending positions), columns by
// the word on the complement.
Eigen::MatrixXcd bipartite_matrix(const Eigen::VectorXcd& ambient,
                                  const IndexSubset& J, int d, int N);
// Inverse of bipartite_matrix.
Eigen::VectorXcd assemble_bipartite(const Eigen::MatrixXcd& split,
                                    const IndexSubset& J, int d, int N);

// Reduced state on the J factors of a sector state; factors keep their
// ascending order.  Linear, trace preserving, compatible with nesting.
DensityMatrix partial_trace(const PureState& state, const IndexSubset& J);

// Partial trace of a Hermitian operator given in sector coordinates.
Eigen::MatrixXcd partial_trace(const Sector& sector, const Eigen::MatrixXcd& op,
                               const IndexSubset& J);

// Partial trace of an operator on a bare k-factor product space, keeping
// the 1-based positions listed in `keep`.
Eigen::MatrixXcd partial_trace_dense(const Eigen::MatrixXcd& op, int d, int k,
                                     const std::vector<int>& keep);

// Tr over the complement of J of |a><b|; the off-diagonal block that
// couples two states at the level of their J-marginals.
Eigen::MatrixXcd transition_rdm(const PureState& a, const PureState& b,
                                const IndexSubset& J);

// The reduced states of one sector state (or sector density) on a family
// of subsets.  For m-uniform families on symmetric or antisymmetric
// sectors all parts coincide; that redundancy is kept deliberately, so the
// object is exactly the tuple a marginal-consistency problem constrains.
struct MarginalVector {
  Sector sector;
  std::vector<IndexSubset> subsets;
  std::vector<DensityMatrix> parts;

  const DensityMatrix& part(const IndexSubset& J) const;
};

MarginalVector marginal_vector(const PureState& state, int m);
MarginalVector marginal_vector(const Sector& sector, const Eigen::MatrixXcd& rho,
                               int m);
// Assembles a marginal vector from explicit parts (structure validated).
MarginalVector make_marginal_vector(const Sector& sector,
                                    std::vector<IndexSubset> subsets,
                                    std::vector<DensityMatrix> parts);

// The linear map from Hermitian operators on the sector (as real
// coordinates, dimension D^2) to the concatenated real coordinates of
// their reduced operators on each subset of the family.  Construction
// cross-checks the matrix against direct partial traces on five seeded
// random densities.
class ContractionMap {
 public:
  ContractionMap(Sector sector, std::vector<IndexSubset> subsets);

  const Sector& sector() const { return sector_; }
  const std::vector<IndexSubset>& subsets() const { return subsets_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Concatenated coordinates of the reduced operators of `op`.
  Eigen::VectorXd apply_coords(const Eigen::VectorXd& op_coords) const;
  // Concatenated coordinates of the parts of a marginal vector, in this
  // map's subset order.
  Eigen::VectorXd target_coords(const MarginalVector& q) const;
  // Numerical rank at a relative singular-value cut.
  int rank(double rel_cut = default_tolerances().rank_cut) const;

 private:
  Sector sector_;
  std::vector<IndexSubset> subsets_;
  Eigen::MatrixXd matrix_;
};

ContractionMap gamma_matrix(const Sector& sector, std::vector<IndexSubset> subsets);

// Orthonormal Hermitian traceless operators spanning the kernel of the
// contraction map.  Moving a density matrix along any element changes no
// reduced state on the subset family.
struct KernelBasis {
  Sector sector;
  std::vector<IndexSubset> subsets;
  std::vector<Eigen::MatrixXcd> elements;

  int dimension() const { return static_cast<int>(elements.size()); }
};

KernelBasis gamma_kernel(const Sector& sector, std::vector<IndexSubset> subsets,
                         const Tolerances& tol = default_tolerances());

// Kernel of the contraction map restricted to operators supported on the
// span of the given orthonormal columns; elements are returned lifted to
// the sector.  An empty result certifies injectivity on that span.
KernelBasis restricted_kernel(const ContractionMap& gamma,
                              const Eigen::MatrixXcd& subspace,
                              const Tolerances& tol = default_tolerances());

// One-body occupation bound for N fermions: every eigenvalue of a
// trace-normalized one-body reduced state lies in [0, 1/N].
struct PauliReport {
  Eigen::VectorXd eigenvalues;  // descending
  bool satisfied;
};

PauliReport pauli_check(const Eigen::MatrixXcd& rho1, int N,
                        const Tolerances& tol = default_tolerances());

// Explicit compression of an m-body reduced state onto the symmetric or
// antisymmetric m-body subspace.  Never applied implicitly; errors if the
// state has weight outside the subspace.
DensityMatrix compress_marginal(const DensityMatrix& part, const Sector& m_sector,
                                const Tolerances& tol = default_tolerances());

}  // namespace qmarg

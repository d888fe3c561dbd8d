// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "qmarg/tolerances.hpp"

namespace qmarg {

enum class SectorKind { Full, Symmetric, Antisymmetric };

std::string to_string(SectorKind kind);

// A finite-dimensional N-particle state space over a d-level constituent:
// the full tensor power, its symmetric subspace, or its antisymmetric
// subspace.  Construction validates the parameters and enforces the
// dense-workstation guard d^N <= 4096; oversized requests are rejected,
// never truncated.
class Sector {
 public:
  Sector(int d, int N, SectorKind kind);

  int d() const { return d_; }
  int N() const { return N_; }
  SectorKind kind() const { return kind_; }

  // Dimension of the sector itself.
  int dimension() const { return dimension_; }
  // Dimension d^N of the ambient tensor-product space.
  long ambient_dimension() const { return ambient_; }

  bool operator==(const Sector& other) const {
    return d_ == other.d_ && N_ == other.N_ && kind_ == other.kind_;
  }
  bool operator!=(const Sector& other) const { return !(*this == other); }

 private:
  int d_;
  int N_;
  SectorKind kind_;
  int dimension_;
  long ambient_;
};

// Dimension formula alone: d^N, C(d+N-1, N) or C(d, N).
// Shares all validation with Sector construction.
int sector_dimension(int d, int N, SectorKind kind);

// Occupation word labelling one basis vector: a length-N vector of
// 1-based constituent levels.  Full sector: arbitrary word; symmetric:
// non-decreasing; antisymmetric: strictly increasing.
using BasisLabel = std::vector<int>;

// All labels of the sector in lexicographic order.  The position of a
// label in this list is its coordinate index.
std::vector<BasisLabel> basis_labels(const Sector& sector);

// Index of one label within basis_labels(sector).
int label_index(const Sector& sector, const BasisLabel& label);

// A unit vector in sector coordinates.
struct PureState {
  Sector sector;
  Eigen::VectorXcd amplitudes;

  PureState(Sector sector, Eigen::VectorXcd amplitudes,
            const Tolerances& tol = default_tolerances());
};

// Isometry from sector coordinates into the ambient d^N-dimensional
// tensor-product space.  Columns are orthonormal; for the full sector it
// is the identity.  Symmetric columns average the distinct rearrangements
// of the label word; antisymmetric columns are signed sums over all
// rearrangements (Slater determinants of the occupied levels).
Eigen::MatrixXcd embedding_isometry(const Sector& sector);

// Basis vector of the antisymmetric sector occupying the given levels.
PureState slater_state(const Sector& sector, const std::vector<int>& orbitals);

// The pair (|0..0> + |1..1>)/sqrt(2), (|0..0> - |1..1>)/sqrt(2) in the
// symmetric sector of N qubits.  The two states share every proper
// marginal, which makes them the canonical witness that marginal data can
// fail to determine a pure state.
std::pair<PureState, PureState> ghz_pair(int N);

// Level-occupation duality between N-particle and (d-N)-particle
// antisymmetric sectors.  `matrix` is the signed permutation sending the
// basis vector occupying S to the one occupying the complement of S, with
// sign the parity of sorting (S, S^c) into (1..d).  On states the duality
// acts antilinearly: apply() conjugates the amplitudes before applying the
// matrix.  That convention makes the one-body marginal of the image state
// equal (I - N*rho_1)/(d - N) exactly, with no transpose.
struct ParticleHoleMap {
  Sector source;
  Sector target;
  Eigen::MatrixXcd matrix;

  PureState apply(const PureState& state) const;
};

ParticleHoleMap particle_hole_map(const Sector& sector);

// Logical codewords of the five-qubit stabilizer code, as states of the
// full sector of five qubits.  The code space is fixed (eigenvalue +1) by
// the four cyclic shifts of the generator pattern X Z Z X I; the codewords
// are the normalized projections of |00000> and |11111> onto it.
std::pair<PureState, PureState> five_qubit_code();

}  // namespace qmarg

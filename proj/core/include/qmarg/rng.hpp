// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace qmarg {

// Deterministic random source.  Gaussian variates are produced by an
// explicit Box-Muller transform instead of std::normal_distribution, whose
// output is implementation defined; identical seeds must give identical
// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform();
  // Standard normal.
  double normal();
  // Complex standard normal, variance 1 per component pair.
  std::complex<double> cnormal();

  // Haar-random unit vector of the given dimension.
  Eigen::VectorXcd haar_state(int dim);
  // Matrix with i.i.d. complex normal entries.
  Eigen::MatrixXcd ginibre(int rows, int cols);
  // Full-rank random density matrix (Hilbert-Schmidt flavoured).
  Eigen::MatrixXcd random_density(int dim);
  // Random Hermitian matrix with O(1) entries.
  Eigen::MatrixXcd random_hermitian(int dim);

  // Decorrelated child seed, for spawning independent sub-streams.
  std::uint64_t child_seed();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qmarg

// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/rng.hpp"

#include <cmath>

namespace qmarg {

double Rng::uniform() {
  // 53-bit mantissa fill, uniform on [0, 1).
  return (gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Eigen::VectorXcd Rng::haar_state(int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cnormal();
  v.normalize();
  return v;
}

Eigen::MatrixXcd Rng::ginibre(int rows, int cols) {
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cnormal();
  return g;
}

Eigen::MatrixXcd Rng::random_density(int dim) {
  const Eigen::MatrixXcd g = ginibre(dim, dim);
  Eigen::MatrixXcd rho = g * g.adjoint();
  // Small ridge keeps the result comfortably full rank.
  rho += 1e-3 * Eigen::MatrixXcd::Identity(dim, dim);
  rho /= rho.trace().real();
  return rho;
}

Eigen::MatrixXcd Rng::random_hermitian(int dim) {
  const Eigen::MatrixXcd g = ginibre(dim, dim);
  return 0.5 * (g + g.adjoint());
}

std::uint64_t Rng::child_seed() {
  // splitmix64 finalizer over the next raw draw.
  std::uint64_t z = gen_() + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qmarg

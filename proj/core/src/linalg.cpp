// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/linalg.hpp"

#include <cmath>

#include "qmarg/errors.hpp"

namespace qmarg {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

Eigen::VectorXd hermitian_to_coords(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::VectorXd x(n * n);
  int k = 0;
  for (int i = 0; i < n; ++i) x(k++) = a(i, i).real();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      x(k++) = kSqrt2 * a(i, j).real();
      x(k++) = kSqrt2 * a(i, j).imag();
    }
  }
  return x;
}

Eigen::MatrixXcd coords_to_hermitian(const Eigen::VectorXd& x, int dim) {
  if (x.size() != static_cast<Eigen::Index>(dim) * dim)
    throw ValidationError("coordinate vector length does not match dimension");
  Eigen::MatrixXcd a(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) a(i, i) = x(k++);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double re = x(k++) / kSqrt2;
      const double im = x(k++) / kSqrt2;
      a(i, j) = std::complex<double>(re, im);
      a(j, i) = std::complex<double>(re, -im);
    }
  }
  return a;
}

double hermiticity_defect(const Eigen::MatrixXcd& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.rows() - 1);
}

Eigen::MatrixXcd clip_psd(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& psd, double rel_cut) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(psd);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const int n = static_cast<int>(ev.size());
  const double top = std::max(ev(n - 1), 0.0);
  const double cut = rel_cut * top;
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (ev(i) > cut) ++rank;
  Eigen::MatrixXcd basis(n, rank);
  // Descending eigenvalue order.
  for (int k = 0; k < rank; ++k) basis.col(k) = es.eigenvectors().col(n - 1 - k);
  return basis;
}

double max_principal_cosine(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  const Eigen::MatrixXcd overlap = a.adjoint() * b;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op,
                                const std::vector<int>& positions, int d, int N) {
  const int m = static_cast<int>(positions.size());
  long dm = 1;
  for (int i = 0; i < m; ++i) dm *= d;
  if (op.rows() != dm || op.cols() != dm)
    throw ValidationError("operator dimension does not match the subset size");
  long dn = 1;
  for (int i = 0; i < N; ++i) dn *= d;

  // Digit weights: factor p (1-based) carries weight d^(N-p), big endian.
  std::vector<long> weight(N + 1, 1);
  for (int p = N - 1; p >= 1; --p) weight[p] = weight[p + 1] * d;

  std::vector<int> in_subset(N + 1, -1);
  for (int k = 0; k < m; ++k) in_subset[positions[k]] = k;

  // Row/column decomposition of a full index into (subset word, rest word).
  std::vector<long> sub_index(dn), rest_index(dn);
  for (long x = 0; x < dn; ++x) {
    long rem = x, s = 0, r = 0;
    for (int p = 1; p <= N; ++p) {
      const long digit = rem / weight[p];
      rem %= weight[p];
      if (in_subset[p] >= 0)
        s = s * d + digit;
      else
        r = r * d + digit;
    }
    sub_index[x] = s;
    rest_index[x] = r;
  }

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dn, dn);
  for (long x = 0; x < dn; ++x)
    for (long y = 0; y < dn; ++y)
      if (rest_index[x] == rest_index[y])
        out(x, y) = op(sub_index[x], sub_index[y]);
  return out;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const std::complex<double> ov = a.dot(b);
  return std::norm(ov);
}

Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& a, double rel_cut) {
  if (a.cols() == 0) return a;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  qr.setThreshold(rel_cut);
  const int rank = static_cast<int>(qr.rank());
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), rank);
  return q;
}

}  // namespace qmarg

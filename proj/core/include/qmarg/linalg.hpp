// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qmarg {

// Real coordinates for Hermitian matrices.
//
// A Hermitian matrix on a D-dimensional space is identified with a vector
// in R^(D^2) through an orthonormal basis of the real vector space of
// Hermitian matrices (Hilbert-Schmidt inner product).  Layout: the D
// diagonal entries first, then for every pair i < j in row-major order the
// two coordinates sqrt(2)*Re(A_ij) and sqrt(2)*Im(A_ij).  The map is a
// linear isometry: <A, B>_HS equals the Euclidean product of coordinates.
Eigen::VectorXd hermitian_to_coords(const Eigen::MatrixXcd& a);
Eigen::MatrixXcd coords_to_hermitian(const Eigen::VectorXd& x, int dim);

// Largest absolute deviation from Hermitian symmetry, max |A - A^dag|.
double hermiticity_defect(const Eigen::MatrixXcd& a);

// Extreme eigenvalues of a Hermitian matrix.
double min_eigenvalue(const Eigen::MatrixXcd& a);
double max_eigenvalue(const Eigen::MatrixXcd& a);

// Eigenvalue clipping onto the positive semidefinite cone.
Eigen::MatrixXcd clip_psd(const Eigen::MatrixXcd& a);

// Orthonormal basis (columns) of the numerical range of a PSD matrix:
// eigenvectors whose eigenvalue exceeds rel_cut times the largest one,
// ordered by descending eigenvalue.
Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& psd, double rel_cut);

// Largest cosine of a principal angle between the column spans of two
// matrices with orthonormal columns; 0 means fully orthogonal subspaces.
double max_principal_cosine(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Kronecker product.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Lift an operator acting on the tensor factors listed in `positions`
// (1-based, strictly increasing, each factor of dimension d) to the full
// N-factor product space, identity elsewhere.  The k-th factor of `op`
// acts on factor positions[k] of the product.
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op,
                                const std::vector<int>& positions, int d, int N);

// Trace distance (1/2)*||a - b||_1 between Hermitian matrices.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// |<a, b>|^2 for unit vectors.
double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Orthonormalize the columns of a (thin QR with rank detection).
Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& a, double rel_cut);

}  // namespace qmarg

// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/cone.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <utility>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"

namespace qmarg {

namespace {

using Eigen::MatrixXcd;

double spectral_norm(const MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  // JacobiSVD on purpose; see the note in facegeom.cpp on the
  // divide-and-conquer SVD of Eigen 3.4.
  Eigen::JacobiSVD<MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

// Modified Gram-Schmidt: orthonormalize the columns of `cols` against the
// (already orthonormal) `prefix` and against each other, skipping columns
// whose remainder drops below drop_tol after normalization.  Deterministic
// and sign-preserving, so coordinate-aligned subspaces get
// coordinate-aligned bases and chosen blocks are recovered literally.
MatrixXcd gram_schmidt(const MatrixXcd& prefix, const MatrixXcd& cols,
                       double drop_tol) {
  const long dim = cols.rows();
  MatrixXcd kept(dim, cols.cols());
  long count = 0;
  for (long j = 0; j < cols.cols(); ++j) {
    Eigen::VectorXcd v = cols.col(j);
    double scale = v.norm();
    if (scale <= drop_tol) continue;
    v /= scale;
    if (prefix.cols() > 0) v -= prefix * (prefix.adjoint() * v);
    for (long k = 0; k < count; ++k) v -= kept.col(k) * kept.col(k).dot(v);
    double residual = v.norm();
    if (residual <= drop_tol) continue;
    kept.col(count++) = v / residual;
  }
  return kept.leftCols(count);
}

MatrixXcd inverse_sqrt(const MatrixXcd& psd) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(psd);
  return es.operatorInverseSqrt();
}

// Schur-complement deficit Y23^dag Y22^{-1} Y23 - Y33 pulled back by
// X33^{-1/2}; its top eigenvalue is the minimal shift.
MatrixXcd shift_kernel_matrix(const BlockDecomposition& d) {
  const long n3 = d.x33.rows();
  MatrixXcd schur = MatrixXcd::Zero(n3, n3);
  if (d.y22.rows() > 0)
    schur = d.y23.adjoint() * d.y22.llt().solve(d.y23);
  MatrixXcd xis = inverse_sqrt(d.x33);
  return xis * (schur - d.y33) * xis;
}

void require_definite(const MatrixXcd& block, const char* name) {
  if (block.rows() == 0) return;
  double lo = min_eigenvalue(block);
  if (lo <= 0.0) {
    std::ostringstream msg;
    msg << "the " << name << " block is not positive definite (minimum "
        << "eigenvalue " << lo << ")";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

LocalHamiltonian::LocalHamiltonian(Sector sector_in, int locality_in,
                                   std::map<IndexSubset, MatrixXcd> terms_in,
                                   const Tolerances& tol)
    : sector(std::move(sector_in)),
      locality(locality_in),
      terms(std::move(terms_in)) {
  if (locality < 1 || locality > sector.N())
    throw ValidationError("the locality is outside 1..N");
  long part_dim = 1;
  for (int i = 0; i < locality; ++i) part_dim *= sector.d();
  for (const auto& [subset, term] : terms) {
    if (static_cast<int>(subset.indices.size()) != locality)
      throw ValidationError("a term subset does not have exactly m parties: " +
                            subset.key());
    if (subset.indices.front() < 1 || subset.indices.back() > sector.N())
      throw ValidationError("a term subset leaves the range 1..N: " +
                            subset.key());
    if (term.rows() != part_dim || term.cols() != part_dim)
      throw ValidationError("the term on " + subset.key() +
                            " does not act on the subset space");
    if (hermiticity_defect(term) > tol.structural)
      throw ValidationError("the term on " + subset.key() + " is not Hermitian");
  }
}

LocalHamiltonian uniform_local_hamiltonian(const Sector& sector, int locality,
                                           const MatrixXcd& term,
                                           const Tolerances& tol) {
  std::map<IndexSubset, MatrixXcd> terms;
  for (const IndexSubset& subset : all_subsets(sector.N(), locality))
    terms.emplace(subset, term);
  return LocalHamiltonian(sector, locality, std::move(terms), tol);
}

MatrixXcd assemble_hamiltonian(const LocalHamiltonian& h) {
  const long ambient = h.sector.ambient_dimension();
  MatrixXcd total = MatrixXcd::Zero(ambient, ambient);
  for (const auto& [subset, term] : h.terms)
    total += embed_operator(term, subset.indices, h.sector.d(), h.sector.N());
  if (h.sector.kind() == SectorKind::Full) return total;
  MatrixXcd isometry = embedding_isometry(h.sector);
  return isometry.adjoint() * total * isometry;
}

ConeMembership polar_cone_membership(const LocalHamiltonian& h,
                                     const Tolerances& tol) {
  ConeMembership result;
  result.min_eigenvalue = min_eigenvalue(assemble_hamiltonian(h));
  result.member = result.min_eigenvalue >= -tol.psd_floor;
  return result;
}

ExposedFace exposed_face(const LocalHamiltonian& h, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(assemble_hamiltonian(h));
  ExposedFace face;
  face.ground_energy = es.eigenvalues()(0);
  int count = 0;
  while (count < es.eigenvalues().size() &&
         es.eigenvalues()(count) <= face.ground_energy + tol.ground_space)
    ++count;
  face.ground_space = es.eigenvectors().leftCols(count);
  if (count == 1) {
    PureState ground(h.sector, face.ground_space.col(0), tol);
    face.exposed_point = marginal_vector(ground, h.locality);
  }
  return face;
}

MatrixXcd BlockDecomposition::assemble_v() const {
  const long total = basis.cols();
  MatrixXcd blocks = MatrixXcd::Zero(total, total);
  blocks.bottomRightCorner(dims[2], dims[2]) = x33;
  return basis * blocks * basis.adjoint();
}

MatrixXcd BlockDecomposition::assemble_w() const {
  const long total = basis.cols();
  MatrixXcd blocks = MatrixXcd::Zero(total, total);
  blocks.block(0, dims[0] + dims[1], dims[0], dims[2]) = y13;
  blocks.block(dims[0] + dims[1], 0, dims[2], dims[0]) = y13.adjoint();
  blocks.block(dims[0], dims[0], dims[1], dims[1]) = y22;
  blocks.block(dims[0], dims[0] + dims[1], dims[1], dims[2]) = y23;
  blocks.block(dims[0] + dims[1], dims[0], dims[2], dims[1]) = y23.adjoint();
  blocks.bottomRightCorner(dims[2], dims[2]) = y33;
  return basis * blocks * basis.adjoint();
}

MatrixXcd BlockDecomposition::shifted(double t) const {
  return t * assemble_v() + assemble_w();
}

BlockDecomposition block_decompose(const MatrixXcd& h_v, const MatrixXcd& h_w,
                                   const MatrixXcd& a, const MatrixXcd& b,
                                   const Tolerances& tol) {
  const long dim = h_v.rows();
  if (h_v.cols() != dim || h_w.rows() != dim || h_w.cols() != dim)
    throw ValidationError("the two Hamiltonians are not square of equal size");
  if (a.rows() != dim || b.rows() != dim)
    throw ValidationError("a subspace does not live in the Hamiltonian space");
  if (hermiticity_defect(h_v) > tol.structural)
    throw ValidationError("the first Hamiltonian is not Hermitian");
  if (hermiticity_defect(h_w) > tol.structural)
    throw ValidationError("the second Hamiltonian is not Hermitian");

  const MatrixXcd empty(dim, 0);
  MatrixXcd q_a = gram_schmidt(empty, a, 1e-7);
  MatrixXcd q_b = gram_schmidt(empty, b, 1e-7);

  double containment_defect =
      (q_b - q_a * (q_a.adjoint() * q_b)).cwiseAbs().maxCoeff();
  if (containment_defect > tol.containment) {
    std::ostringstream msg;
    msg << "subspace B is not contained in subspace A (containment defect "
        << containment_defect << ")";
    throw PreconditionError(msg.str());
  }
  double kernel_defect = (h_v * q_a).cwiseAbs().maxCoeff();
  if (kernel_defect > tol.containment) {
    std::ostringstream msg;
    msg << "the first Hamiltonian does not annihilate subspace A (residual "
        << kernel_defect << ")";
    throw PreconditionError(msg.str());
  }

  BlockDecomposition result;
  MatrixXcd q_2 = gram_schmidt(q_b, q_a, 1e-7);
  MatrixXcd q_ab(dim, q_b.cols() + q_2.cols());
  q_ab << q_b, q_2;
  MatrixXcd q_3 = gram_schmidt(q_ab, MatrixXcd::Identity(dim, dim), 1e-7);
  result.dims = {static_cast<int>(q_b.cols()), static_cast<int>(q_2.cols()),
                 static_cast<int>(q_3.cols())};
  result.basis = MatrixXcd(dim, dim);
  result.basis << q_b, q_2, q_3;

  double y11_norm = (q_b.adjoint() * h_w * q_b).cwiseAbs().maxCoeff();
  if (y11_norm > tol.containment) {
    std::ostringstream msg;
    msg << "the second Hamiltonian does not vanish on subspace B "
        << "(block norm " << y11_norm << ")";
    throw PreconditionError(msg.str());
  }
  if (result.dims[1] > 0) {
    double y12_norm = (q_b.adjoint() * h_w * q_2).cwiseAbs().maxCoeff();
    if (y12_norm > tol.containment) {
      std::ostringstream msg;
      msg << "the second Hamiltonian couples subspace B to its complement "
          << "inside A (block norm " << y12_norm << ")";
      throw PreconditionError(msg.str());
    }
  }

  result.x33 = q_3.adjoint() * h_v * q_3;
  result.y13 = q_b.adjoint() * h_w * q_3;
  result.y22 = q_2.adjoint() * h_w * q_2;
  result.y23 = q_2.adjoint() * h_w * q_3;
  result.y33 = q_3.adjoint() * h_w * q_3;
  return result;
}

ObstructionReport y13_obstruction(const BlockDecomposition& d,
                                  const Tolerances& tol) {
  ObstructionReport report;
  report.norm_y13 = spectral_norm(d.y13);
  report.blocked = report.norm_y13 > tol.certificate;
  return report;
}

ShiftResult minimal_shift(const BlockDecomposition& d, const Tolerances& tol) {
  if (y13_obstruction(d, tol).blocked) return {false, 0.0};
  if (d.dims[2] == 0) return {true, 0.0};
  require_definite(d.x33, "X33");
  require_definite(d.y22, "Y22");
  double top = max_eigenvalue(shift_kernel_matrix(d));
  return {true, std::max(0.0, top)};
}

ShiftResult sufficient_shift(const BlockDecomposition& d,
                             const Tolerances& tol) {
  if (y13_obstruction(d, tol).blocked) return {false, 0.0};
  if (d.dims[2] == 0) return {true, 0.0};
  require_definite(d.x33, "X33");
  require_definite(d.y22, "Y22");
  double lambda = min_eigenvalue(d.x33);
  double norm_y33 = spectral_norm(d.y33);
  if (d.dims[1] == 0) return {true, -norm_y33 / lambda};
  double mu = min_eigenvalue(d.y22);
  double norm_y23 = spectral_norm(d.y23);
  return {true, (norm_y23 * norm_y23 - mu * norm_y33) / (mu * lambda)};
}

BlockDecomposition glitch_fixture() {
  MatrixXcd h_v = MatrixXcd::Zero(3, 3);
  h_v(2, 2) = 1.0;
  MatrixXcd h_w = MatrixXcd::Zero(3, 3);
  h_w(0, 2) = h_w(2, 0) = 2.0;
  h_w(1, 1) = 2.0;
  h_w(1, 2) = h_w(2, 1) = 0.3;
  h_w(2, 2) = 0.25;
  MatrixXcd a = MatrixXcd::Identity(3, 2);
  MatrixXcd b = MatrixXcd::Identity(3, 1);
  return block_decompose(h_v, h_w, a, b);
}

ShiftPipelineFixture shift_pipeline_fixture() {
  Sector sector(2, 2, SectorKind::Full);
  MatrixXcd zero1 = MatrixXcd::Zero(2, 2);
  MatrixXcd number = zero1;
  number(1, 1) = 1.0;

  std::map<IndexSubset, MatrixXcd> v_terms;
  v_terms.emplace(IndexSubset({1}), number);
  v_terms.emplace(IndexSubset({2}), zero1);

  std::map<IndexSubset, MatrixXcd> w_terms;
  w_terms.emplace(IndexSubset({1}), -0.5 * number);
  w_terms.emplace(IndexSubset({2}), number);

  MatrixXcd a = MatrixXcd::Zero(4, 2);
  a(0, 0) = a(1, 1) = 1.0;
  MatrixXcd b = MatrixXcd::Zero(4, 1);
  b(0, 0) = 1.0;

  return ShiftPipelineFixture{sector,
                              LocalHamiltonian(sector, 1, std::move(v_terms)),
                              LocalHamiltonian(sector, 1, std::move(w_terms)),
                              std::move(a), std::move(b)};
}

}  // namespace qmarg

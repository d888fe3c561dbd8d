// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"

namespace qmarg {
namespace {

struct EigenPairs {
  Eigen::VectorXd values;    // descending, above the positivity cut
  Eigen::MatrixXcd vectors;  // matching columns
  double min_gap;            // smallest consecutive gap of the kept values
};

EigenPairs positive_eigenpairs(const Eigen::MatrixXcd& rho, double cut) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const Eigen::Index n = rho.rows();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (es.eigenvalues()(i) > cut) keep.push_back(i);  // descending
  }
  EigenPairs out;
  out.values.resize(static_cast<Eigen::Index>(keep.size()));
  out.vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (size_t t = 0; t < keep.size(); ++t) {
    out.values(static_cast<Eigen::Index>(t)) = es.eigenvalues()(keep[t]);
    out.vectors.col(static_cast<Eigen::Index>(t)) = es.eigenvectors().col(keep[t]);
  }
  out.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < out.values.size(); ++i)
    out.min_gap = std::min(out.min_gap, out.values(i) - out.values(i + 1));
  return out;
}

// 1-based positions of the elements of `inner` within the ordered tuple
// `outer`; requires inner to be a subset of outer.
std::vector<int> positions_within(const IndexSubset& inner,
                                  const IndexSubset& outer) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(inner.size()));
  for (int p : inner.indices) {
    auto it = std::find(outer.indices.begin(), outer.indices.end(), p);
    if (it == outer.indices.end())
      throw PreconditionError("internal subset bookkeeping failed");
    out.push_back(static_cast<int>(it - outer.indices.begin()) + 1);
  }
  return out;
}

long power_dim(int d, int count) {
  long dim = 1;
  for (int i = 0; i < count; ++i) dim *= d;
  return dim;
}

}  // namespace

std::string to_string(ReconstructionStatus status) {
  switch (status) {
    case ReconstructionStatus::Unique:
      return "unique";
    case ReconstructionStatus::Ambiguous:
      return "ambiguous";
    case ReconstructionStatus::Inconsistent:
      return "inconsistent";
    case ReconstructionStatus::Degenerate:
      return "degenerate";
  }
  throw Error("unknown reconstruction status");
}

ReconstructionResult diosi_reconstruct(const DensityMatrix& rho_J,
                                       const DensityMatrix& rho_Jp,
                                       const Sector& sector,
                                       const IndexSubset& J,
                                       const IndexSubset& Jp,
                                       const Tolerances& tol) {
  if (sector.kind() != SectorKind::Full) {
    throw PreconditionError(
        "reconstruction from two overlapping parts is defined on full "
        "product sectors");
  }
  const int N = sector.N();
  const int d = sector.d();
  for (int p : J.indices) {
    if (p > N) throw PreconditionError("subset " + J.key() + " is not contained in 1.." + std::to_string(N));
  }
  for (int p : Jp.indices) {
    if (p > N) throw PreconditionError("subset " + Jp.key() + " is not contained in 1.." + std::to_string(N));
  }
  bool overlap = false;
  for (int p : J.indices) overlap = overlap || Jp.contains(p);
  if (!overlap)
    throw PreconditionError("the two subsets must overlap");
  std::vector<bool> covered(static_cast<size_t>(N), false);
  for (int p : J.indices) covered[static_cast<size_t>(p - 1)] = true;
  for (int p : Jp.indices) covered[static_cast<size_t>(p - 1)] = true;
  for (bool c : covered) {
    if (!c) throw PreconditionError("the two subsets must cover every party");
  }
  if (J.size() == N || Jp.size() == N)
    throw PreconditionError("the two subsets must be proper subsets");
  if (rho_J.dimension() != power_dim(d, J.size()))
    throw ValidationError("the first reduced state has the wrong dimension");
  if (rho_Jp.dimension() != power_dim(d, Jp.size()))
    throw ValidationError("the second reduced state has the wrong dimension");

  ReconstructionResult result;

  // Degeneracy defeats the eigenvalue pairing between a part and its
  // derived complement, so it is detected before any assembly.
  const EigenPairs part_J =
      positive_eigenpairs(rho_J.entries(), tol.degeneracy_gap);
  const EigenPairs part_Jp =
      positive_eigenpairs(rho_Jp.entries(), tol.degeneracy_gap);
  if (part_J.min_gap < tol.degeneracy_gap ||
      part_Jp.min_gap < tol.degeneracy_gap) {
    result.status = ReconstructionStatus::Degenerate;
    return result;
  }

  // Complement parts, derivable because each complement sits inside the
  // other subset.
  const IndexSubset Jc = J.complement(N);
  const IndexSubset Jpc = Jp.complement(N);
  const Eigen::MatrixXcd rho_Jc = partial_trace_dense(
      rho_Jp.entries(), d, Jp.size(), positions_within(Jc, Jp));
  const Eigen::MatrixXcd rho_Jpc = partial_trace_dense(
      rho_J.entries(), d, J.size(), positions_within(Jpc, J));
  const EigenPairs comp_J = positive_eigenpairs(rho_Jc, tol.degeneracy_gap);
  const EigenPairs comp_Jp = positive_eigenpairs(rho_Jpc, tol.degeneracy_gap);

  const Eigen::Index r =
      std::min(part_J.values.size(), comp_J.values.size());
  const Eigen::Index rp =
      std::min(part_Jp.values.size(), comp_Jp.values.size());

  const long ambient = sector.ambient_dimension();
  Eigen::MatrixXcd system(ambient, r + rp);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::MatrixXcd outer =
        part_J.vectors.col(k) * comp_J.vectors.col(k).transpose();
    system.col(k) =
        std::sqrt(part_J.values(k)) * assemble_bipartite(outer, J, d, N);
  }
  for (Eigen::Index j = 0; j < rp; ++j) {
    const Eigen::MatrixXcd outer =
        part_Jp.vectors.col(j) * comp_Jp.vectors.col(j).transpose();
    system.col(r + j) =
        -std::sqrt(part_Jp.values(j)) * assemble_bipartite(outer, Jp, d, N);
  }
  result.system_rows = system.rows();
  result.system_cols = system.cols();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < tol.rank_cut) ++null_dim;
  }

  if (null_dim == 0) {
    result.status = ReconstructionStatus::Inconsistent;
    result.residual = sv(sv.size() - 1);
    return result;
  }
  if (null_dim >= 2) {
    result.status = ReconstructionStatus::Ambiguous;
    return result;
  }

  Eigen::VectorXcd x = svd.matrixV().col(sv.size() - 1);
  if (std::abs(x(0)) < 1e-12) {
    result.status = ReconstructionStatus::Inconsistent;
    return result;
  }
  x /= x(0);  // global-phase gauge
  double modulus_defect = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    modulus_defect = std::max(modulus_defect, std::abs(std::abs(x(i)) - 1.0));
  if (modulus_defect > tol.unimodularity) {
    // A one-dimensional nullspace without unit moduli admits no acceptable
    // phase assignment at all.
    result.status = ReconstructionStatus::Inconsistent;
    result.residual = modulus_defect;
    return result;
  }

  Eigen::VectorXcd amplitudes = system.leftCols(r) * x.head(r);
  amplitudes /= amplitudes.norm();
  PureState state(sector, amplitudes, tol);
  double reproduction = 0.0;
  reproduction = std::max(
      reproduction,
      (partial_trace(state, J).entries() - rho_J.entries()).cwiseAbs().maxCoeff());
  reproduction = std::max(reproduction,
                          (partial_trace(state, Jp).entries() - rho_Jp.entries())
                              .cwiseAbs()
                              .maxCoeff());
  if (reproduction > tol.reproduction) {
    // The phase system is solvable but the assembled state fails to return
    // the inputs: the parts do not come from one pure state.
    result.status = ReconstructionStatus::Inconsistent;
    result.residual = reproduction;
    return result;
  }

  result.status = ReconstructionStatus::Unique;
  result.state = std::move(state);
  result.phase_solution = std::move(x);
  result.residual = reproduction;
  return result;
}

}  // namespace qmarg

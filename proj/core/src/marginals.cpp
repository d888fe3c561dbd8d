// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/marginals.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/rng.hpp"

namespace qmarg {
namespace {

int64_t int_pow(int base, int exp) {
  int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void check_subset_range(const IndexSubset& J, int N) {
  if (J.indices.empty() || J.indices.back() > N) {
    throw PreconditionError("subset " + J.key() +
                            " is not contained in 1.." + std::to_string(N));
  }
}

// Row/column indices of a full product-space word under the (J, J^C) split.
struct BipartiteIndexer {
  std::vector<int64_t> row_weight;  // per position, 0 if traced over
  std::vector<int64_t> col_weight;
  int64_t rows = 1, cols = 1;
  int d, N;

  BipartiteIndexer(const IndexSubset& J, int d_, int N_) : d(d_), N(N_) {
    row_weight.assign(N, 0);
    col_weight.assign(N, 0);
    const int m = J.size();
    rows = int_pow(d, m);
    cols = int_pow(d, N - m);
    int r = 0, c = 0;
    for (int p = 1; p <= N; ++p) {
      if (J.contains(p)) {
        row_weight[p - 1] = int_pow(d, m - 1 - r);
        ++r;
      } else {
        col_weight[p - 1] = int_pow(d, N - m - 1 - c);
        ++c;
      }
    }
  }

  void split(int64_t x, int64_t& row, int64_t& col) const {
    row = 0;
    col = 0;
    for (int p = N - 1; p >= 0; --p) {
      const int64_t digit = x % d;
      x /= d;
      row += digit * row_weight[p];
      col += digit * col_weight[p];
    }
  }
};

Eigen::VectorXcd ambient_vector(const PureState& state) {
  if (state.sector.kind() == SectorKind::Full) return state.amplitudes;
  return embedding_isometry(state.sector) * state.amplitudes;
}

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

IndexSubset::IndexSubset(std::vector<int> idx) : indices(std::move(idx)) {
  if (indices.empty()) throw ValidationError("index subset is empty");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1) {
      throw ValidationError("index subset contains a non-positive position");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw ValidationError(
          "index subset positions must be strictly increasing");
    }
  }
}

IndexSubset IndexSubset::complement(int N) const {
  check_subset_range(*this, N);
  std::vector<int> rest;
  for (int p = 1; p <= N; ++p) {
    if (!contains(p)) rest.push_back(p);
  }
  if (rest.empty()) {
    throw PreconditionError("complement of the full index set is empty");
  }
  return IndexSubset(std::move(rest));
}

bool IndexSubset::contains(int p) const {
  return std::binary_search(indices.begin(), indices.end(), p);
}

std::string IndexSubset::key() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) os << ',';
    os << indices[i];
  }
  return os.str();
}

std::vector<IndexSubset> all_subsets(int N, int m) {
  if (m < 1 || m > N) {
    throw PreconditionError("subset size " + std::to_string(m) +
                            " is outside 1.." + std::to_string(N));
  }
  std::vector<IndexSubset> out;
  std::vector<int> cur(m);
  for (int i = 0; i < m; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(cur);
    int i = m - 1;
    while (i >= 0 && cur[i] == N - (m - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, const Tolerances& tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw ValidationError("density matrix is not square");
  }
  const double herm = hermiticity_defect(entries_);
  if (herm > tol.structural) {
    throw ValidationError("density matrix is not Hermitian: deviation " +
                          std::to_string(herm));
  }
  const double trace_err = std::abs(entries_.trace() - std::complex<double>(1.0, 0.0));
  if (trace_err > tol.structural) {
    throw ValidationError("density matrix trace differs from one by " +
                          std::to_string(trace_err));
  }
  const double lo = min_eigenvalue(entries_);
  if (lo < -tol.psd_floor) {
    throw ValidationError("density matrix has a negative eigenvalue " +
                          std::to_string(lo));
  }
}

Eigen::MatrixXcd bipartite_matrix(const Eigen::VectorXcd& ambient,
                                  const IndexSubset& J, int d, int N) {
  check_subset_range(J, N);
  const BipartiteIndexer ix(J, d, N);
  if (ambient.size() != ix.rows * ix.cols) {
    throw PreconditionError("ambient vector length does not match d^N");
  }
  Eigen::MatrixXcd M(ix.rows, ix.cols);
  for (int64_t x = 0; x < ambient.size(); ++x) {
    int64_t r, c;
    ix.split(x, r, c);
    M(r, c) = ambient(x);
  }
  return M;
}

Eigen::VectorXcd assemble_bipartite(const Eigen::MatrixXcd& split,
                                    const IndexSubset& J, int d, int N) {
  check_subset_range(J, N);
  const BipartiteIndexer ix(J, d, N);
  if (split.rows() != ix.rows || split.cols() != ix.cols) {
    throw PreconditionError("split matrix shape does not match the subset");
  }
  Eigen::VectorXcd out(ix.rows * ix.cols);
  for (int64_t x = 0; x < out.size(); ++x) {
    int64_t r, c;
    ix.split(x, r, c);
    out(x) = split(r, c);
  }
  return out;
}

DensityMatrix partial_trace(const PureState& state, const IndexSubset& J) {
  const Sector& sec = state.sector;
  check_subset_range(J, sec.N());
  const Eigen::MatrixXcd M =
      bipartite_matrix(ambient_vector(state), J, sec.d(), sec.N());
  return DensityMatrix(M * M.adjoint());
}

Eigen::MatrixXcd partial_trace(const Sector& sector, const Eigen::MatrixXcd& op,
                               const IndexSubset& J) {
  check_subset_range(J, sector.N());
  if (op.rows() != sector.dimension() || op.cols() != sector.dimension()) {
    throw PreconditionError("operator shape does not match the sector dimension");
  }
  if (sector.kind() == SectorKind::Full) {
    return partial_trace_dense(op, sector.d(), sector.N(), J.indices);
  }
  // Work term by term through an eigendecomposition so the ambient-space
  // operator is never materialised.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op);
  const Eigen::MatrixXcd E = embedding_isometry(sector);
  const int64_t dim = int_pow(sector.d(), J.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < op.rows(); ++i) {
    const Eigen::VectorXcd v = E * es.eigenvectors().col(i);
    const Eigen::MatrixXcd M = bipartite_matrix(v, J, sector.d(), sector.N());
    out.noalias() += es.eigenvalues()(i) * (M * M.adjoint());
  }
  return out;
}

Eigen::MatrixXcd partial_trace_dense(const Eigen::MatrixXcd& op, int d, int k,
                                     const std::vector<int>& keep) {
  const int64_t full = int_pow(d, k);
  if (op.rows() != full || op.cols() != full) {
    throw PreconditionError("operator shape does not match d^k");
  }
  const IndexSubset J(keep);
  check_subset_range(J, k);
  const BipartiteIndexer ix(J, d, k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ix.rows, ix.rows);
  // Precompute the split of every full index once.
  std::vector<int64_t> row_of(full), col_of(full);
  for (int64_t x = 0; x < full; ++x) ix.split(x, row_of[x], col_of[x]);
  std::vector<std::vector<int64_t>> by_col(ix.cols);
  for (int64_t x = 0; x < full; ++x) by_col[col_of[x]].push_back(x);
  for (const auto& group : by_col) {
    for (int64_t x : group) {
      for (int64_t y : group) {
        out(row_of[x], row_of[y]) += op(x, y);
      }
    }
  }
  return out;
}

Eigen::MatrixXcd transition_rdm(const PureState& a, const PureState& b,
                                const IndexSubset& J) {
  if (a.sector != b.sector) {
    throw PreconditionError("transition reduced state needs a shared sector");
  }
  const Sector& sec = a.sector;
  check_subset_range(J, sec.N());
  const Eigen::MatrixXcd Ma =
      bipartite_matrix(ambient_vector(a), J, sec.d(), sec.N());
  const Eigen::MatrixXcd Mb =
      bipartite_matrix(ambient_vector(b), J, sec.d(), sec.N());
  return Ma * Mb.adjoint();
}

const DensityMatrix& MarginalVector::part(const IndexSubset& J) const {
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets[i] == J) return parts[i];
  }
  throw PreconditionError("marginal vector has no part for subset " + J.key());
}

MarginalVector marginal_vector(const PureState& state, int m) {
  const Sector& sec = state.sector;
  std::vector<IndexSubset> subsets = all_subsets(sec.N(), m);
  std::vector<DensityMatrix> parts;
  parts.reserve(subsets.size());
  for (const auto& J : subsets) parts.push_back(partial_trace(state, J));
  return MarginalVector{sec, std::move(subsets), std::move(parts)};
}

MarginalVector marginal_vector(const Sector& sector, const Eigen::MatrixXcd& rho,
                               int m) {
  std::vector<IndexSubset> subsets = all_subsets(sector.N(), m);
  std::vector<DensityMatrix> parts;
  parts.reserve(subsets.size());
  for (const auto& J : subsets) {
    parts.emplace_back(partial_trace(sector, rho, J));
  }
  return MarginalVector{sector, std::move(subsets), std::move(parts)};
}

MarginalVector make_marginal_vector(const Sector& sector,
                                    std::vector<IndexSubset> subsets,
                                    std::vector<DensityMatrix> parts) {
  if (subsets.empty()) throw ValidationError("marginal vector has no subsets");
  if (subsets.size() != parts.size()) {
    throw ValidationError("marginal vector subset and part counts differ");
  }
  std::set<IndexSubset> seen;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    check_subset_range(subsets[i], sector.N());
    if (!seen.insert(subsets[i]).second) {
      throw ValidationError("marginal vector repeats subset " + subsets[i].key());
    }
    const int64_t want = int_pow(sector.d(), subsets[i].size());
    if (parts[i].dimension() != want) {
      throw ValidationError("part for subset " + subsets[i].key() +
                            " has dimension " +
                            std::to_string(parts[i].dimension()) +
                            ", expected " + std::to_string(want));
    }
  }
  // Canonical order keeps serialisation and solver input deterministic.
  std::vector<std::size_t> perm(subsets.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return subsets[a] < subsets[b];
  });
  std::vector<IndexSubset> s2;
  std::vector<DensityMatrix> p2;
  for (std::size_t i : perm) {
    s2.push_back(std::move(subsets[i]));
    p2.push_back(std::move(parts[i]));
  }
  return MarginalVector{sector, std::move(s2), std::move(p2)};
}

ContractionMap::ContractionMap(Sector sector, std::vector<IndexSubset> subsets)
    : sector_(std::move(sector)), subsets_(std::move(subsets)) {
  if (subsets_.empty()) {
    throw PreconditionError("contraction map needs at least one subset");
  }
  std::set<IndexSubset> seen;
  for (const auto& J : subsets_) {
    check_subset_range(J, sector_.N());
    if (!seen.insert(J).second) {
      throw PreconditionError("contraction map repeats subset " + J.key());
    }
  }

  const int D = sector_.dimension();
  int64_t rows = 0;
  for (const auto& J : subsets_) {
    const int64_t dj = int_pow(sector_.d(), J.size());
    rows += dj * dj;
  }
  matrix_.resize(rows, static_cast<int64_t>(D) * D);

  Eigen::MatrixXcd E;
  if (sector_.kind() != SectorKind::Full) E = embedding_isometry(sector_);

  int64_t row0 = 0;
  for (const auto& J : subsets_) {
    const int64_t dj = int_pow(sector_.d(), J.size());
    // Split every embedded basis column across (J, J^C) once.
    std::vector<Eigen::MatrixXcd> M(D);
    for (int i = 0; i < D; ++i) {
      Eigen::VectorXcd col;
      if (sector_.kind() == SectorKind::Full) {
        col = Eigen::VectorXcd::Zero(sector_.ambient_dimension());
        col(i) = 1.0;
      } else {
        col = E.col(i);
      }
      M[i] = bipartite_matrix(col, J, sector_.d(), sector_.N());
    }
    const std::complex<double> im(0.0, 1.0);
    int64_t col = 0;
    for (int i = 0; i < D; ++i, ++col) {
      matrix_.block(row0, col, dj * dj, 1) =
          hermitian_to_coords(M[i] * M[i].adjoint());
    }
    for (int i = 0; i < D; ++i) {
      for (int j = i + 1; j < D; ++j) {
        const Eigen::MatrixXcd cross = M[i] * M[j].adjoint();
        matrix_.block(row0, col++, dj * dj, 1) =
            hermitian_to_coords((cross + cross.adjoint()) / kSqrt2);
        matrix_.block(row0, col++, dj * dj, 1) =
            hermitian_to_coords((im * cross - im * cross.adjoint()) / kSqrt2);
      }
    }
    row0 += dj * dj;
  }

  // Cross-check the assembled matrix against direct partial traces.
  Rng rng(0xC0FFEE);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd rho = rng.random_density(D);
    const Eigen::VectorXd via_matrix = matrix_ * hermitian_to_coords(rho);
    Eigen::VectorXd direct(matrix_.rows());
    int64_t at = 0;
    for (const auto& J : subsets_) {
      const Eigen::VectorXd part =
          hermitian_to_coords(partial_trace(sector_, rho, J));
      direct.segment(at, part.size()) = part;
      at += part.size();
    }
    if ((via_matrix - direct).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error("contraction map failed its construction self-check");
    }
  }
}

Eigen::VectorXd ContractionMap::apply_coords(const Eigen::VectorXd& op_coords) const {
  if (op_coords.size() != matrix_.cols()) {
    throw PreconditionError("operator coordinate length does not match the map");
  }
  return matrix_ * op_coords;
}

Eigen::VectorXd ContractionMap::target_coords(const MarginalVector& q) const {
  if (q.sector != sector_) {
    throw PreconditionError("marginal vector sector does not match the map");
  }
  Eigen::VectorXd out(matrix_.rows());
  int64_t at = 0;
  for (const auto& J : subsets_) {
    const Eigen::VectorXd part = hermitian_to_coords(q.part(J).entries());
    out.segment(at, part.size()) = part;
    at += part.size();
  }
  return out;
}

int ContractionMap::rank(double rel_cut) const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > rel_cut * s(0)) ++r;
  }
  return r;
}

ContractionMap gamma_matrix(const Sector& sector,
                            std::vector<IndexSubset> subsets) {
  return ContractionMap(sector, std::move(subsets));
}

KernelBasis gamma_kernel(const Sector& sector, std::vector<IndexSubset> subsets,
                         const Tolerances& tol) {
  const ContractionMap gamma(sector, std::move(subsets));
  const int D = sector.dimension();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gamma.matrix(), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol.rank_cut * s(0)) ++rank;
  }
  std::vector<Eigen::MatrixXcd> elements;
  for (int64_t k = rank; k < svd.matrixV().cols(); ++k) {
    elements.push_back(coords_to_hermitian(svd.matrixV().col(k), D));
  }
  return KernelBasis{sector, gamma.subsets(), std::move(elements)};
}

KernelBasis restricted_kernel(const ContractionMap& gamma,
                              const Eigen::MatrixXcd& subspace,
                              const Tolerances& tol) {
  const int D = gamma.sector().dimension();
  if (subspace.rows() != D || subspace.cols() < 1) {
    throw PreconditionError("subspace columns must live in the sector space");
  }
  const int r = static_cast<int>(subspace.cols());
  const double ortho =
      (subspace.adjoint() * subspace - Eigen::MatrixXcd::Identity(r, r))
          .cwiseAbs()
          .maxCoeff();
  if (ortho > 1e-10) {
    throw PreconditionError("subspace columns are not orthonormal");
  }

  // Coordinates of U h U^* for each Hermitian basis element h of the
  // restricted space.
  Eigen::MatrixXd lift(static_cast<int64_t>(D) * D,
                       static_cast<int64_t>(r) * r);
  for (int64_t k = 0; k < lift.cols(); ++k) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(lift.cols());
    unit(k) = 1.0;
    const Eigen::MatrixXcd h = coords_to_hermitian(unit, r);
    lift.col(k) = hermitian_to_coords(subspace * h * subspace.adjoint());
  }
  const Eigen::MatrixXd restricted = gamma.matrix() * lift;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol.rank_cut * s(0)) ++rank;
  }
  std::vector<Eigen::MatrixXcd> elements;
  for (int64_t k = rank; k < svd.matrixV().cols(); ++k) {
    const Eigen::MatrixXcd h = coords_to_hermitian(svd.matrixV().col(k), r);
    elements.push_back(subspace * h * subspace.adjoint());
  }
  return KernelBasis{gamma.sector(), gamma.subsets(), std::move(elements)};
}

PauliReport pauli_check(const Eigen::MatrixXcd& rho1, int N,
                        const Tolerances& tol) {
  if (N < 1) throw PreconditionError("particle number must be positive");
  if (rho1.rows() == 0 || rho1.rows() != rho1.cols()) {
    throw ValidationError("one-body reduced state is not square");
  }
  const double herm = hermiticity_defect(rho1);
  if (herm > tol.structural) {
    throw ValidationError("one-body reduced state is not Hermitian: deviation " +
                          std::to_string(herm));
  }
  const double trace_err =
      std::abs(rho1.trace() - std::complex<double>(1.0, 0.0));
  if (trace_err > 1e-10) {
    throw ValidationError("one-body reduced state trace differs from one by " +
                          std::to_string(trace_err));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho1,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  const bool ok = ev.minCoeff() >= -tol.psd_floor &&
                  ev.maxCoeff() <= 1.0 / static_cast<double>(N) + tol.psd_floor;
  return PauliReport{std::move(ev), ok};
}

DensityMatrix compress_marginal(const DensityMatrix& part, const Sector& m_sector,
                                const Tolerances& tol) {
  if (part.dimension() != m_sector.ambient_dimension()) {
    throw PreconditionError(
        "part dimension does not match the ambient dimension of the target "
        "sector");
  }
  const Eigen::MatrixXcd E = embedding_isometry(m_sector);
  const Eigen::MatrixXcd compressed = E.adjoint() * part.entries() * E;
  const double lost = std::abs(1.0 - compressed.trace().real());
  if (lost > tol.reproduction) {
    throw ValidationError(
        "reduced state carries weight " + std::to_string(lost) +
        " outside the target subspace");
  }
  // Renormalise the tiny trace defect so the result is a valid density.
  Eigen::MatrixXcd out = compressed / compressed.trace().real();
  return DensityMatrix(std::move(out), tol);
}

}  // namespace qmarg

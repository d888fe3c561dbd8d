// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/facegeom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/rng.hpp"

namespace qmarg {
namespace {

double max_abs(const Eigen::MatrixXcd& a) {
  return a.cwiseAbs().maxCoeff();
}

Eigen::VectorXcd ambient_amplitudes(const PureState& state) {
  if (state.sector.kind() == SectorKind::Full) return state.amplitudes;
  return embedding_isometry(state.sector) * state.amplitudes;
}

// Affine section {y : C y = b} with projection through a pseudo-inverse.
// JacobiSVD on purpose: the constraint matrices here have highly degenerate
// spectra, on which the divide-and-conquer SVD of Eigen 3.4 can return an
// inconsistent factorization.
struct AffineSection {
  Eigen::MatrixXd C;
  Eigen::VectorXd b;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd;
  int pinv_rank = 0;

  AffineSection(Eigen::MatrixXd c, Eigen::VectorXd rhs)
      : C(std::move(c)), b(std::move(rhs)) {
    svd.compute(C, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = sv.size() > 0 ? sv(0) * 1e-12 : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) ++pinv_rank;
    }
  }

  Eigen::VectorXd pinv_apply(const Eigen::VectorXd& v) const {
    const auto& sv = svd.singularValues();
    Eigen::VectorXd w = svd.matrixU().leftCols(pinv_rank).transpose() * v;
    for (int i = 0; i < pinv_rank; ++i) w(i) /= sv(i);
    return svd.matrixV().leftCols(pinv_rank) * w;
  }

  Eigen::VectorXd project(const Eigen::VectorXd& y) const {
    return y - pinv_apply(C * y - b);
  }

  double defect(const Eigen::VectorXd& y) const { return (C * y - b).norm(); }

  // Null directions of C: traceless operators invisible to every part.
  Eigen::MatrixXd kernel(double rel_cut) const {
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    const Eigen::Index n = C.cols();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = i < sv.size() ? sv(i) : 0.0;
      if (s <= rel_cut * top) keep.push_back(i);
    }
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(keep.size()));
    for (Eigen::Index t = 0; t < out.cols(); ++t)
      out.col(t) = svd.matrixV().col(keep[static_cast<size_t>(t)]);
    return out;
  }
};

struct FeasiblePoint {
  Eigen::VectorXd coords;
  double residual;
};

// One alternating-projection run between the affine section and the PSD
// cone, with the Dykstra correction on the cone side.  Success is either
// an affine iterate that is already positive or a positive iterate whose
// affine defect is below target.  A plateau above the stall threshold is
// reported as infeasibility, an exhausted budget as no verdict.
FeasiblePoint run_projections(const AffineSection& aff, int r, Rng& rng,
                              const Tolerances& tol) {
  Eigen::VectorXd y = hermitian_to_coords(rng.random_density(r));
  Eigen::VectorXd p = Eigen::VectorXd::Zero(y.size());
  double best = std::numeric_limits<double>::infinity();
  double prev_best = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= tol.max_iterations; ++k) {
    Eigen::VectorXd a = aff.project(y);
    const double affine_defect = aff.defect(a);  // never assume projection exactness
    if (affine_defect <= tol.residual_target &&
        min_eigenvalue(coords_to_hermitian(a, r)) >= -tol.psd_floor) {
      return {a, affine_defect};
    }
    Eigen::VectorXd z = a + p;
    Eigen::VectorXd x = hermitian_to_coords(clip_psd(coords_to_hermitian(z, r)));
    p = z - x;
    y = x;
    const double res = aff.defect(x);
    if (res <= tol.residual_target) return {x, res};
    best = std::min(best, res);
    if (k % 500 == 0) {
      if (std::isfinite(prev_best) && best > tol.stall_threshold &&
          prev_best - best <= 1e-3 * prev_best) {
        std::ostringstream msg;
        msg << "the marginal vector is not representable within tolerance: "
               "the alternating projection stalled at residual "
            << best;
        throw InfeasibleError(msg.str());
      }
      prev_best = best;
    }
  }
  throw ConvergenceError(
      "the projection iteration budget was exhausted before reaching a "
      "verdict on representability");
}

struct PartDeviation {
  double common = 0.0;       // largest entry deviation from the target parts
  double transition = 0.0;   // largest entry of any cross transition block
};

PartDeviation certificate_deviations(const MarginalVector& target,
                                     const Eigen::MatrixXcd& subspace,
                                     const Tolerances& tol) {
  const Sector& sector = target.sector;
  PartDeviation dev;
  std::vector<PureState> basis;
  basis.reserve(static_cast<size_t>(subspace.cols()));
  for (Eigen::Index i = 0; i < subspace.cols(); ++i)
    basis.emplace_back(sector, subspace.col(i), tol);
  for (size_t s = 0; s < target.subsets.size(); ++s) {
    const IndexSubset& J = target.subsets[s];
    const Eigen::MatrixXcd& want = target.parts[s].entries();
    for (size_t i = 0; i < basis.size(); ++i) {
      dev.common = std::max(
          dev.common, max_abs(partial_trace(basis[i], J).entries() - want));
      for (size_t j = i + 1; j < basis.size(); ++j) {
        dev.transition = std::max(
            dev.transition, max_abs(transition_rdm(basis[i], basis[j], J)));
      }
    }
  }
  return dev;
}

double stacked_defect(const MarginalVector& target, const Eigen::MatrixXcd& op) {
  double sq = 0.0;
  for (size_t s = 0; s < target.subsets.size(); ++s) {
    sq += (partial_trace(target.sector, op, target.subsets[s]) -
           target.parts[s].entries())
              .squaredNorm();
  }
  return std::sqrt(sq);
}

}  // namespace

std::vector<std::pair<int, int>> SchmidtForm::groups(double group_tol) const {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(coefficients.size());
  int first = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || coefficients(first) - coefficients(i) > group_tol) {
      out.emplace_back(first, i);
      first = i;
    }
  }
  return out;
}

SchmidtForm schmidt_decompose(const PureState& psi, const IndexSubset& J,
                              const Tolerances& tol) {
  const Sector& sector = psi.sector;
  Eigen::MatrixXcd split = bipartite_matrix(ambient_amplitudes(psi), J,
                                            sector.d(), sector.N());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      split, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.structural) ++rank;
  }
  SchmidtForm form;
  form.coefficients = sv.head(rank);
  form.left = svd.matrixU().leftCols(rank);
  form.right = svd.matrixV().leftCols(rank).conjugate();
  return form;
}

CommonRdmReport common_rdm_check(const std::vector<PureState>& vectors, int m,
                                 const Tolerances& tol) {
  if (vectors.empty())
    throw PreconditionError("common_rdm_check requires at least one state");
  const Sector& sector = vectors[0].sector;
  for (const PureState& v : vectors) {
    if (v.sector != sector)
      throw PreconditionError("the input states live in different sectors");
  }
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (size_t j = i; j < vectors.size(); ++j) {
      const std::complex<double> g =
          vectors[i].amplitudes.dot(vectors[j].amplitudes);
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(g - want) > tol.reproduction)
        throw PreconditionError("the input states are not orthonormal");
    }
  }

  std::vector<MarginalVector> margs;
  margs.reserve(vectors.size());
  for (const PureState& v : vectors) margs.push_back(marginal_vector(v, m));

  CommonRdmReport report;
  for (size_t s = 0; s < margs[0].subsets.size(); ++s) {
    const Eigen::MatrixXcd& ref = margs[0].parts[s].entries();
    for (size_t i = 1; i < margs.size(); ++i) {
      report.max_marginal_deviation =
          std::max(report.max_marginal_deviation,
                   max_abs(margs[i].parts[s].entries() - ref));
    }
  }
  const std::vector<IndexSubset> family = all_subsets(sector.N(), m);
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (size_t j = i + 1; j < vectors.size(); ++j) {
      for (const IndexSubset& J : family) {
        report.max_transition_norm =
            std::max(report.max_transition_norm,
                     max_abs(transition_rdm(vectors[i], vectors[j], J)));
      }
    }
  }
  report.common = report.max_marginal_deviation <= tol.certificate;
  report.transitions_vanish = report.max_transition_norm <= tol.certificate;
  if (report.common && report.transitions_vanish) report.common_value = margs[0];
  return report;
}

StrongOrthReport strong_orthogonality_check(const PureState& a,
                                            const PureState& b,
                                            const IndexSubset& J,
                                            const Tolerances& tol) {
  if (a.sector != b.sector)
    throw PreconditionError("the input states live in different sectors");
  using Status = StrongOrthReport::Status;
  const double overlap = std::abs(a.amplitudes.dot(b.amplitudes));
  if (overlap > tol.reproduction) {
    return {Status::PreconditionViolated, 0.0, "the states are not orthogonal"};
  }
  const Eigen::MatrixXcd pa = partial_trace(a, J).entries();
  const Eigen::MatrixXcd pb = partial_trace(b, J).entries();
  if (max_abs(pa - pb) > tol.certificate) {
    return {Status::PreconditionViolated, 0.0,
            "the states do not share a reduced state on the subset"};
  }
  if (max_abs(transition_rdm(a, b, J)) > tol.certificate) {
    return {Status::PreconditionViolated, 0.0,
            "the transition block on the subset does not vanish"};
  }
  const IndexSubset Jc = J.complement(a.sector.N());
  const Eigen::MatrixXcd ra =
      orthonormal_range(partial_trace(a, Jc).entries(), tol.rank_cut);
  const Eigen::MatrixXcd rb =
      orthonormal_range(partial_trace(b, Jc).entries(), tol.rank_cut);
  const double cosine = max_principal_cosine(ra, rb);
  return {cosine <= tol.range_orthogonality ? Status::Holds : Status::Fails,
          cosine, ""};
}

PreimageFace preimage_face(const MarginalVector& target, std::uint64_t seed,
                           const Tolerances& tol) {
  const Sector& sector = target.sector;
  const int D = sector.dimension();
  ContractionMap gamma(sector, target.subsets);
  const Eigen::MatrixXd& G = gamma.matrix();
  const Eigen::Index rows = G.rows();

  Eigen::MatrixXd c_full(rows + 1, G.cols());
  c_full.topRows(rows) = G;
  c_full.row(rows) =
      hermitian_to_coords(Eigen::MatrixXcd::Identity(D, D)).transpose();
  Eigen::VectorXd b(rows + 1);
  b.head(rows) = gamma.target_coords(target);
  b(rows) = 1.0;

  // Support reduction: a null vector n of a target part forces every
  // positive solution into the kernel of the lifted operator of n n^dag,
  // because its expectation is pinned to zero.  Restricting to that kernel
  // removes the flat tangencies that make plain alternating projection
  // sublinear on rank-deficient targets.
  Eigen::MatrixXcd support;
  {
    Eigen::MatrixXcd s_op = Eigen::MatrixXcd::Zero(D, D);
    bool any_null = false;
    Eigen::Index offset = 0;
    for (size_t s = 0; s < target.subsets.size(); ++s) {
      const Eigen::MatrixXcd& part = target.parts[s].entries();
      const Eigen::Index block = part.rows() * part.rows();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(part);
      for (Eigen::Index i = 0; i < part.rows(); ++i) {
        if (es.eigenvalues()(i) <= tol.psd_floor) {
          any_null = true;
          const Eigen::VectorXcd n = es.eigenvectors().col(i);
          const Eigen::VectorXd lifted =
              G.middleRows(offset, block).transpose() *
              hermitian_to_coords(n * n.adjoint());
          s_op += coords_to_hermitian(lifted, D);
        }
      }
      offset += block;
    }
    if (any_null) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s_op);
      const double top = es.eigenvalues()(D - 1);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < D; ++i) {
        if (es.eigenvalues()(i) <= tol.psd_floor * std::max(1.0, top))
          keep.push_back(i);
      }
      if (keep.empty()) {
        throw InfeasibleError(
            "the marginal vector is not representable within tolerance: the "
            "null vectors of its parts leave no admissible support");
      }
      if (static_cast<int>(keep.size()) == D) {
        // Nothing was cut; stay in the original basis so the unreduced
        // constraint matrix and the final lift agree.
        support = Eigen::MatrixXcd::Identity(D, D);
      } else {
        support.resize(D, static_cast<Eigen::Index>(keep.size()));
        for (size_t t = 0; t < keep.size(); ++t)
          support.col(static_cast<Eigen::Index>(t)) =
              es.eigenvectors().col(keep[t]);
      }
    } else {
      support = Eigen::MatrixXcd::Identity(D, D);
    }
  }
  const int r = static_cast<int>(support.cols());

  Eigen::MatrixXd c_red;
  if (r == D) {
    c_red = std::move(c_full);
  } else {
    Eigen::MatrixXd lift(D * D, r * r);
    for (int q = 0; q < r * r; ++q) {
      const Eigen::MatrixXcd h =
          coords_to_hermitian(Eigen::VectorXd::Unit(r * r, q), r);
      lift.col(q) = hermitian_to_coords(support * h * support.adjoint());
    }
    c_red = c_full * lift;
  }

  AffineSection aff(std::move(c_red), b);
  {
    const Eigen::VectorXd nearest = aff.pinv_apply(aff.b);
    if (aff.defect(nearest) > tol.stall_threshold) {
      std::ostringstream msg;
      msg << "the marginal vector is not representable within tolerance: no "
             "Hermitian operator on the admissible support matches it "
             "(affine defect "
          << aff.defect(nearest) << ")";
      throw InfeasibleError(msg.str());
    }
  }

  Rng master(seed);
  std::vector<FeasiblePoint> found;
  found.reserve(static_cast<size_t>(tol.starts));
  for (int s = 0; s < tol.starts; ++s) {
    Rng child(master.child_seed());
    found.push_back(run_projections(aff, r, child, tol));
  }
  std::vector<size_t> order(found.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t lhs, size_t rhs) {
    return found[lhs].residual < found[rhs].residual;
  });
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(r * r);
  for (size_t i : order) mean += found[i].coords;
  mean /= static_cast<double>(found.size());

  Eigen::MatrixXcd rho = coords_to_hermitian(mean, r);
  rho /= rho.trace().real();

  // Enlarge the support along null directions of the constraint matrix
  // whenever a step keeps the iterate positive but raises its rank: the
  // averaged solution then sat on a proper subface and the representative
  // must absorb the missed directions.
  const Eigen::MatrixXd null_dirs = aff.kernel(tol.rank_cut);
  auto rank_of = [&](const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    const double cut = tol.rank_cut * std::max(es.eigenvalues()(r - 1), 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < r; ++i)
      if (es.eigenvalues()(i) > cut) ++rank;
    return rank;
  };
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    const double top = es.eigenvalues()(r - 1);
    const double cut = tol.rank_cut * std::max(top, 0.0);
    int rank = 0;
    double smallest_positive = top;
    for (Eigen::Index i = 0; i < r; ++i) {
      if (es.eigenvalues()(i) > cut) {
        ++rank;
        smallest_positive = std::min(smallest_positive, es.eigenvalues()(i));
      }
    }
    bool changed = false;
    const double step = 0.25 * smallest_positive;
    for (Eigen::Index t = 0; t < null_dirs.cols(); ++t) {
      const Eigen::MatrixXcd dir = coords_to_hermitian(null_dirs.col(t), r);
      for (const double sign : {1.0, -1.0}) {
        const Eigen::MatrixXcd cand = rho + sign * step * dir;
        if (min_eigenvalue(cand) >= -1e-13 && rank_of(cand) > rank) {
          rho = 0.5 * (rho + cand);
          rank = rank_of(rho);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  const Eigen::MatrixXcd basis_red = orthonormal_range(rho, tol.rank_cut);
  Eigen::MatrixXcd subspace = support * basis_red;
  Eigen::MatrixXcd lifted = support * rho * support.adjoint();
  lifted /= lifted.trace().real();

  const PartDeviation dev = certificate_deviations(target, subspace, tol);
  PreimageFace face{sector,
                    target,
                    std::move(subspace),
                    DensityMatrix(lifted, tol),
                    dev.common <= tol.certificate,
                    dev.transition <= tol.certificate,
                    stacked_defect(target, lifted)};
  return face;
}

std::string to_string(Extremality verdict) {
  switch (verdict) {
    case Extremality::Extreme:
      return "extreme";
    case Extremality::NotExtreme:
      return "not_extreme";
    case Extremality::Undecided:
      return "undecided";
  }
  throw Error("unknown extremality verdict");
}

ExtremalityVerdict is_extreme_marginal(const MarginalVector& target,
                                       std::uint64_t seed,
                                       const Tolerances& tol) {
  std::optional<PreimageFace> maybe_face;
  try {
    maybe_face.emplace(preimage_face(target, seed, tol));
  } catch (const ConvergenceError&) {
    return ExtremalityVerdict{};  // undecided, no witness
  }
  const PreimageFace& face = *maybe_face;
  ExtremalityVerdict out;
  out.preimage_dimension = face.dimension();
  if (face.common_rdm && face.transitions_vanish) {
    out.verdict = Extremality::Extreme;
    return out;
  }

  // Constructive refutation: pick the basis direction of the face that the
  // contraction map sees most strongly, step the representative both ways,
  // and re-verify by direct partial traces that the two endpoints have
  // distinct marginal vectors averaging to the target.
  const Sector& sector = target.sector;
  const Eigen::MatrixXcd& g = face.subspace;
  const int dim = face.dimension();
  const double sqrt2 = std::sqrt(2.0);
  Eigen::MatrixXcd best_dir;
  double best_norm = -1.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const Eigen::MatrixXcd gi = g.col(i), gj = g.col(j);
      const Eigen::MatrixXcd candidates[3] = {
          gi * gi.adjoint() - gj * gj.adjoint(),
          (gi * gj.adjoint() + gj * gi.adjoint()) / sqrt2,
          (std::complex<double>(0.0, 1.0) * (gi * gj.adjoint() - gj * gi.adjoint())) /
              sqrt2};
      for (const Eigen::MatrixXcd& x : candidates) {
        double sq = 0.0;
        for (const IndexSubset& J : target.subsets)
          sq += partial_trace(sector, x, J).squaredNorm();
        const double norm = std::sqrt(sq);
        if (norm > best_norm) {
          best_norm = norm;
          best_dir = x;
        }
      }
    }
  }
  if (best_norm <= tol.certificate) {
    throw Error(
        "extremality certificates failed but no face direction moves the "
        "marginals; this indicates a defect");
  }

  const Eigen::MatrixXcd& rep = face.representative.entries();
  const double lambda_face =
      min_eigenvalue(g.adjoint() * rep * g);  // smallest eigenvalue on the face
  const double spectral = std::max(std::abs(min_eigenvalue(best_dir)),
                                   std::abs(max_eigenvalue(best_dir)));
  const double eps = 0.45 * lambda_face / spectral;

  auto endpoint = [&](double sign) {
    Eigen::MatrixXcd op = rep + sign * eps * best_dir;
    if (min_eigenvalue(op) < -tol.psd_floor)
      throw Error("a refutation endpoint left the positive cone");
    std::vector<DensityMatrix> parts;
    parts.reserve(target.subsets.size());
    for (const IndexSubset& J : target.subsets)
      parts.emplace_back(partial_trace(sector, op, J), tol);
    return make_marginal_vector(sector, target.subsets, std::move(parts));
  };
  MarginalVector plus = endpoint(1.0);
  MarginalVector minus = endpoint(-1.0);

  double split = 0.0, midpoint_err = 0.0;
  for (size_t s = 0; s < target.subsets.size(); ++s) {
    const Eigen::MatrixXcd& pp = plus.parts[s].entries();
    const Eigen::MatrixXcd& pm = minus.parts[s].entries();
    split = std::max(split, max_abs(pp - pm));
    midpoint_err = std::max(
        midpoint_err, max_abs(0.5 * (pp + pm) - target.parts[s].entries()));
  }
  if (split <= tol.certificate)
    throw Error("the refutation endpoints have equal marginal vectors");
  if (midpoint_err > tol.reproduction)
    throw Error("the refutation endpoints do not average to the target");

  out.verdict = Extremality::NotExtreme;
  out.witness =
      ExtremalityWitness{std::move(plus), std::move(minus), std::move(best_dir)};
  return out;
}

UniquenessReport unique_preimage_check(const MarginalVector& target,
                                       std::uint64_t seed,
                                       const Tolerances& tol) {
  const PreimageFace face = preimage_face(target, seed, tol);
  UniquenessReport report;
  report.preimage_dimension = face.dimension();
  report.unique = face.dimension() == 1;
  bool uniform = true;
  const int m = target.subsets.front().size();
  for (const IndexSubset& J : target.subsets)
    if (J.size() != m) uniform = false;
  report.theorem_applies = uniform &&
                           target.sector.kind() != SectorKind::Full &&
                           2 * m >= target.sector.N();
  if (report.theorem_applies && face.common_rdm && face.transitions_vanish &&
      !report.unique) {
    throw Error(
        "an extreme exchange-sector marginal vector with 2m >= N has a "
        "multi-dimensional pre-image; this contradicts the uniqueness "
        "theorem and indicates a defect");
  }
  return report;
}

UniquenessReport unique_preimage_check(const Sector& sector,
                                       const IndexSubset& J,
                                       const DensityMatrix& rho_J,
                                       const DensityMatrix& rho_Jc,
                                       std::uint64_t seed,
                                       const Tolerances& tol) {
  const IndexSubset Jc = J.complement(sector.N());
  auto side_dim = [&](const IndexSubset& side) {
    long dim = 1;
    for (int i = 0; i < side.size(); ++i) dim *= sector.d();
    return dim;
  };
  if (rho_J.dimension() != side_dim(J))
    throw ValidationError("the first reduced state has the wrong dimension");
  if (rho_Jc.dimension() != side_dim(Jc))
    throw ValidationError("the second reduced state has the wrong dimension");

  MarginalVector pair = make_marginal_vector(
      sector, std::vector<IndexSubset>{J, Jc},
      std::vector<DensityMatrix>{rho_J, rho_Jc});
  const PreimageFace face = preimage_face(pair, seed, tol);
  UniquenessReport report;
  report.preimage_dimension = face.dimension();
  report.unique = face.dimension() == 1;
  const double purity_J =
      (rho_J.entries() * rho_J.entries()).trace().real();
  const double purity_Jc =
      (rho_Jc.entries() * rho_Jc.entries()).trace().real();
  report.theorem_applies = (1.0 - purity_J <= tol.reproduction) &&
                           (1.0 - purity_Jc <= tol.reproduction);
  if (report.theorem_applies && !report.unique) {
    throw Error(
        "a complementary pair of pure reduced states has a multi-dimensional "
        "pre-image; this contradicts the uniqueness theorem and indicates a "
        "defect");
  }
  return report;
}

BoundaryPreimages boundary_preimages(const MarginalVector& target,
                                     std::uint64_t seed,
                                     const Tolerances& tol) {
  const Sector& sector = target.sector;
  const KernelBasis kernel = gamma_kernel(sector, target.subsets, tol);
  if (kernel.dimension() == 0) {
    throw PreconditionError(
        "the contraction map is injective on this sector and subset family; "
        "no kernel direction exists");
  }
  const PreimageFace face = preimage_face(target, seed, tol);
  const Eigen::MatrixXcd& rep = face.representative.entries();
  const double lambda_min = min_eigenvalue(rep);
  const double lambda_max = max_eigenvalue(rep);
  if (lambda_min <= tol.rank_cut * lambda_max) {
    throw PreconditionError(
        "the representative is rank-deficient; the marginal vector is not in "
        "the relative interior of the representable set");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rep);
  const Eigen::VectorXd inv_sqrt =
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd whiten = es.eigenvectors() *
                                  inv_sqrt.asDiagonal() *
                                  es.eigenvectors().adjoint();

  bool have = false;
  double best_distance = -1.0, best_mu_plus = 0.0, best_mu_minus = 0.0;
  Eigen::MatrixXcd best_upper, best_lower;
  for (const Eigen::MatrixXcd& dir : kernel.elements) {
    const Eigen::MatrixXcd scaled = whiten * dir * whiten;
    const double lo = min_eigenvalue(scaled);
    const double hi = max_eigenvalue(scaled);
    if (lo >= -1e-14 || hi <= 1e-14) continue;
    const double mu_plus = -1.0 / lo;
    const double mu_minus = -1.0 / hi;
    const Eigen::MatrixXcd upper = rep + mu_plus * dir;
    const Eigen::MatrixXcd lower = rep + mu_minus * dir;
    const double distance = trace_distance(upper, lower);
    if (distance > best_distance) {
      best_distance = distance;
      best_mu_plus = mu_plus;
      best_mu_minus = mu_minus;
      best_upper = upper;
      best_lower = lower;
      have = true;
    }
  }
  if (!have) {
    throw Error(
        "no kernel direction produced a usable boundary pair; this indicates "
        "a defect");
  }
  return BoundaryPreimages{DensityMatrix(best_lower, tol),
                           DensityMatrix(best_upper, tol),
                           face.representative, best_mu_minus, best_mu_plus};
}

}  // namespace qmarg

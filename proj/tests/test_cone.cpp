// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "qmarg/cone.hpp"
#include "qmarg/errors.hpp"
#include "qmarg/facegeom.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/rng.hpp"
#include "qmarg/spaces.hpp"

using namespace qmarg;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

// Decomposition built directly from chosen blocks in the standard basis of
// C^(d1+d2+d3); B and A are leading coordinate subspaces.
BlockDecomposition from_blocks(const MatrixXcd& x33, const MatrixXcd& y13,
                               const MatrixXcd& y22, const MatrixXcd& y23,
                               const MatrixXcd& y33) {
  const long d1 = y13.rows(), d2 = y22.rows(), d3 = y33.rows();
  const long dim = d1 + d2 + d3;
  MatrixXcd h_v = MatrixXcd::Zero(dim, dim);
  h_v.bottomRightCorner(d3, d3) = x33;
  MatrixXcd h_w = MatrixXcd::Zero(dim, dim);
  h_w.block(0, d1 + d2, d1, d3) = y13;
  h_w.block(d1 + d2, 0, d3, d1) = y13.adjoint();
  h_w.block(d1, d1, d2, d2) = y22;
  h_w.block(d1, d1 + d2, d2, d3) = y23;
  h_w.block(d1 + d2, d1, d3, d2) = y23.adjoint();
  h_w.bottomRightCorner(d3, d3) = y33;
  return block_decompose(h_v, h_w, MatrixXcd::Identity(dim, d1 + d2),
                         MatrixXcd::Identity(dim, d1));
}

MatrixXcd scalar1(double v) {
  MatrixXcd m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("identity terms assemble to the subset count times the identity") {
  for (Sector sector : {Sector(2, 3, SectorKind::Full),
                        Sector(2, 3, SectorKind::Symmetric),
                        Sector(4, 2, SectorKind::Antisymmetric)}) {
    int m = sector.N() == 3 ? 2 : 1;
    long part = 1;
    for (int i = 0; i < m; ++i) part *= sector.d();
    LocalHamiltonian h = uniform_local_hamiltonian(
        sector, m, MatrixXcd::Identity(part, part));
    MatrixXcd assembled = assemble_hamiltonian(h);
    double count = static_cast<double>(all_subsets(sector.N(), m).size());
    CHECK((assembled - count * MatrixXcd::Identity(sector.dimension(),
                                                   sector.dimension()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("a single one-party number term acts diagonally on two qubits") {
  Sector sector(2, 2, SectorKind::Full);
  MatrixXcd number = MatrixXcd::Zero(2, 2);
  number(1, 1) = 1.0;
  std::map<IndexSubset, MatrixXcd> terms;
  terms.emplace(IndexSubset({1}), number);
  terms.emplace(IndexSubset({2}), MatrixXcd::Zero(2, 2));
  MatrixXcd assembled = assemble_hamiltonian(LocalHamiltonian(sector, 1, terms));
  Eigen::Vector4cd expected(0.0, 0.0, 1.0, 1.0);
  CHECK((assembled - MatrixXcd(expected.asDiagonal())).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("a diagonal one-body term gives occupied-level sums on Slater labels") {
  Sector sector(4, 2, SectorKind::Antisymmetric);
  Rng rng(31);
  Eigen::VectorXd levels(4);
  for (int i = 0; i < 4; ++i) levels(i) = rng.uniform();
  MatrixXcd term = Eigen::VectorXcd(levels.cast<std::complex<double>>())
                       .asDiagonal();
  MatrixXcd assembled =
      assemble_hamiltonian(uniform_local_hamiltonian(sector, 1, term));
  std::vector<BasisLabel> labels = basis_labels(sector);
  for (int i = 0; i < sector.dimension(); ++i) {
    double expected = 0.0;
    for (int level : labels[i]) expected += levels(level - 1);
    CHECK(std::abs(assembled(i, i).real() - expected) < 1e-12);
    assembled(i, i) = 0.0;
  }
  CHECK(assembled.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("term validation rejects malformed inputs") {
  Sector sector(2, 2, SectorKind::Full);
  std::map<IndexSubset, MatrixXcd> bad_size;
  bad_size.emplace(IndexSubset({1, 2}), MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(LocalHamiltonian(sector, 2, bad_size), ValidationError);

  std::map<IndexSubset, MatrixXcd> bad_subset;
  bad_subset.emplace(IndexSubset({3}), MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(LocalHamiltonian(sector, 1, bad_subset), ValidationError);

  MatrixXcd skew = MatrixXcd::Zero(2, 2);
  skew(0, 1) = 1.0;
  std::map<IndexSubset, MatrixXcd> non_hermitian;
  non_hermitian.emplace(IndexSubset({1}), skew);
  CHECK_THROWS_AS(LocalHamiltonian(sector, 1, non_hermitian), ValidationError);
}

TEST_CASE("pairing a Hamiltonian with a state equals pairing terms with marginals") {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<IndexSubset, MatrixXcd> terms;
    for (const IndexSubset& subset : all_subsets(3, 2))
      terms.emplace(subset, rng.random_hermitian(4));
    LocalHamiltonian h(sector, 2, terms);
    MatrixXcd rho = rng.random_density(8);
    double via_marginals = 0.0;
    for (const auto& [subset, term] : terms)
      via_marginals += (term * partial_trace(sector, rho, subset)).trace().real();
    double direct = (assemble_hamiltonian(h) * rho).trace().real();
    CHECK(std::abs(via_marginals - direct) < 1e-10);
  }
}

TEST_CASE("on exchange sectors one reduced state carries the subset multiplicity") {
  Sector sector(2, 3, SectorKind::Symmetric);
  Rng rng(78);
  MatrixXcd term = rng.random_hermitian(4);
  LocalHamiltonian h = uniform_local_hamiltonian(sector, 2, term);
  MatrixXcd rho = rng.random_density(sector.dimension());
  MatrixXcd part = partial_trace(sector, rho, IndexSubset({1, 2}));
  double direct = (assemble_hamiltonian(h) * rho).trace().real();
  CHECK(std::abs(direct - 3.0 * (term * part).trace().real()) < 1e-10);
}

TEST_CASE("polar cone membership is the assembled spectrum sign test") {
  Sector sector(2, 2, SectorKind::Full);
  ConeMembership in = polar_cone_membership(
      uniform_local_hamiltonian(sector, 1, MatrixXcd::Identity(2, 2)));
  CHECK(in.member);
  CHECK(in.min_eigenvalue == doctest::Approx(2.0));

  MatrixXcd dip = MatrixXcd::Zero(2, 2);
  dip(0, 0) = -0.3;
  std::map<IndexSubset, MatrixXcd> terms;
  terms.emplace(IndexSubset({1}), dip);
  terms.emplace(IndexSubset({2}), MatrixXcd::Zero(2, 2));
  ConeMembership out = polar_cone_membership(LocalHamiltonian(sector, 1, terms));
  CHECK_FALSE(out.member);
  CHECK(out.min_eigenvalue == doctest::Approx(-0.3));
}

TEST_CASE("identity terms expose the whole sector") {
  Sector sector(4, 2, SectorKind::Antisymmetric);
  ExposedFace face = exposed_face(
      uniform_local_hamiltonian(sector, 1, MatrixXcd::Identity(4, 4)));
  CHECK(face.dimension() == sector.dimension());
  CHECK_FALSE(face.exposed_point.has_value());
}

TEST_CASE("a gapped one-body spectrum exposes the bottom Slater point") {
  Sector sector(4, 2, SectorKind::Antisymmetric);
  Eigen::Vector4cd levels(0.0, 0.4, 1.1, 2.3);
  ExposedFace face = exposed_face(
      uniform_local_hamiltonian(sector, 1, MatrixXcd(levels.asDiagonal())));
  REQUIRE(face.dimension() == 1);
  CHECK(face.ground_energy == doctest::Approx(0.4));
  REQUIRE(face.exposed_point.has_value());

  MarginalVector slater = marginal_vector(slater_state(sector, {1, 2}), 1);
  for (const IndexSubset& subset : face.exposed_point->subsets)
    CHECK((face.exposed_point->part(subset).entries() -
           slater.part(subset).entries())
              .cwiseAbs()
              .maxCoeff() < 1e-10);

  // An engineered two-fold ground degeneracy widens the face to a ball.
  Eigen::Vector4cd tied(0.0, 1.0, 1.0, 3.0);
  ExposedFace ball = exposed_face(
      uniform_local_hamiltonian(sector, 1, MatrixXcd(tied.asDiagonal())));
  CHECK(ball.dimension() == 2);
  CHECK_FALSE(ball.exposed_point.has_value());
}

TEST_CASE("one-dimensional exposed faces are extreme marginal vectors") {
  Sector anti(4, 2, SectorKind::Antisymmetric);
  Eigen::Vector4cd levels(0.0, 0.7, 1.5, 2.2);
  ExposedFace slater = exposed_face(
      uniform_local_hamiltonian(anti, 1, MatrixXcd(levels.asDiagonal())));
  REQUIRE(slater.dimension() == 1);
  CHECK(is_extreme_marginal(*slater.exposed_point).verdict ==
        Extremality::Extreme);

  Sector full(2, 2, SectorKind::Full);
  Rng rng(5);
  std::map<IndexSubset, MatrixXcd> terms;
  terms.emplace(IndexSubset({1}), rng.random_hermitian(2));
  terms.emplace(IndexSubset({2}), rng.random_hermitian(2));
  ExposedFace product = exposed_face(LocalHamiltonian(full, 1, terms));
  REQUIRE(product.dimension() == 1);
  CHECK(is_extreme_marginal(*product.exposed_point).verdict ==
        Extremality::Extreme);
}

TEST_CASE("block decomposition recovers chosen blocks and reassembles") {
  MatrixXcd x33 = MatrixXcd::Identity(2, 2);
  x33(1, 1) = 3.0;
  MatrixXcd y13(1, 2);
  y13 << 0.5, 0.0;
  MatrixXcd y22 = scalar1(2.0);
  MatrixXcd y23(1, 2);
  y23 << 0.1, -0.2;
  MatrixXcd y33 = MatrixXcd::Zero(2, 2);
  y33(0, 0) = 0.7;

  BlockDecomposition d = from_blocks(x33, y13, y22, y23, y33);
  CHECK(d.dims == std::array<int, 3>{1, 1, 2});
  CHECK((d.y13 - y13).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.x33 - x33).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.y32() - y23.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  MatrixXcd h_w_rebuilt = d.assemble_w();
  CHECK(h_w_rebuilt.rows() == 4);
  CHECK((h_w_rebuilt.block(1, 1, 1, 1) - y22).cwiseAbs().maxCoeff() < 1e-12);

  // The same instance conjugated by a random unitary keeps the invariant
  // content: dimensions, block singular values, and reassembly.
  Rng rng(11);
  Eigen::JacobiSVD<MatrixXcd> svd(rng.ginibre(4, 4),
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
  MatrixXcd u = svd.matrixU();
  MatrixXcd h_v_rot = u * d.assemble_v() * u.adjoint();
  MatrixXcd h_w_rot = u * d.assemble_w() * u.adjoint();
  BlockDecomposition rotated = block_decompose(
      h_v_rot, h_w_rot, u * MatrixXcd::Identity(4, 2),
      u * MatrixXcd::Identity(4, 1));
  CHECK(rotated.dims == d.dims);
  CHECK((rotated.assemble_w() - h_w_rot).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((rotated.assemble_v() - h_v_rot).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::JacobiSVD<MatrixXcd> s_rot(rotated.y13);
  CHECK(s_rot.singularValues()(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("a zero Hamiltonian decomposes to zero blocks") {
  MatrixXcd h_v = MatrixXcd::Zero(3, 3);
  h_v(2, 2) = 1.0;
  BlockDecomposition d =
      block_decompose(h_v, MatrixXcd::Zero(3, 3), MatrixXcd::Identity(3, 2),
                      MatrixXcd::Identity(3, 1));
  CHECK(d.y13.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.y22.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.y23.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.y33.cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(y13_obstruction(d).blocked);
}

TEST_CASE("block decomposition rejects pattern violations") {
  MatrixXcd h_v = MatrixXcd::Zero(3, 3);
  h_v(2, 2) = 1.0;
  MatrixXcd a = MatrixXcd::Identity(3, 2);
  MatrixXcd b = MatrixXcd::Identity(3, 1);

  MatrixXcd outside = MatrixXcd::Zero(3, 1);
  outside(2, 0) = 1.0;
  CHECK_THROWS_WITH_AS(block_decompose(h_v, MatrixXcd::Zero(3, 3), a, outside),
                       doctest::Contains("contained"), PreconditionError);

  CHECK_THROWS_WITH_AS(
      block_decompose(MatrixXcd::Identity(3, 3), MatrixXcd::Zero(3, 3), a, b),
      doctest::Contains("annihilate"), PreconditionError);

  MatrixXcd bad_y11 = MatrixXcd::Zero(3, 3);
  bad_y11(0, 0) = 0.2;
  CHECK_THROWS_WITH_AS(block_decompose(h_v, bad_y11, a, b),
                       doctest::Contains("vanish"), PreconditionError);

  MatrixXcd bad_y12 = MatrixXcd::Zero(3, 3);
  bad_y12(0, 1) = bad_y12(1, 0) = 0.2;
  CHECK_THROWS_WITH_AS(block_decompose(h_v, bad_y12, a, b),
                       doctest::Contains("couples"), PreconditionError);
}

TEST_CASE("the glitch instance stays indefinite under every shift") {
  BlockDecomposition d = glitch_fixture();
  CHECK(d.dims == std::array<int, 3>{1, 1, 1});

  ObstructionReport report = y13_obstruction(d);
  CHECK(report.blocked);
  CHECK(report.norm_y13 == doctest::Approx(2.0));

  CHECK_FALSE(minimal_shift(d).attainable);
  CHECK_FALSE(sufficient_shift(d).attainable);

  // Hypotheses of the exposure argument hold...
  CHECK(min_eigenvalue(d.x33) > 0.0);
  CHECK(min_eigenvalue(d.y22) > 0.0);
  // ...yet the shifted pair is indefinite across six decades of t.
  for (int p = 0; p <= 6; ++p)
    CHECK(min_eigenvalue(d.shifted(std::pow(10.0, p))) < -1e-6);
}

TEST_CASE("B inside the kernel of the second Hamiltonian removes the block") {
  ShiftPipelineFixture fixture = shift_pipeline_fixture();
  MatrixXcd h_v = assemble_hamiltonian(fixture.v);
  MatrixXcd h_w = assemble_hamiltonian(fixture.w);
  CHECK((h_w * fixture.subspace_b).cwiseAbs().maxCoeff() < 1e-14);
  BlockDecomposition d =
      block_decompose(h_v, h_w, fixture.subspace_a, fixture.subspace_b);
  CHECK_FALSE(y13_obstruction(d).blocked);
}

TEST_CASE("the minimal shift matches a direct crossing scan") {
  // Scalar blocks: Schur deficit 2^2/2 - 0 = 2.
  BlockDecomposition d = from_blocks(scalar1(1.0), scalar1(0.0), scalar1(2.0),
                                     scalar1(2.0), scalar1(0.0));
  ShiftResult t = minimal_shift(d);
  REQUIRE(t.attainable);
  CHECK(t.value == doctest::Approx(2.0));
  CHECK(min_eigenvalue(d.shifted(t.value - 1e-3)) < -1e-6);
  CHECK(min_eigenvalue(d.shifted(t.value + 1e-8)) >= -1e-10);

  ShiftResult suff = sufficient_shift(d);
  REQUIRE(suff.attainable);
  CHECK(suff.value == doctest::Approx(2.0));
}

TEST_CASE("an already positive pair needs no shift") {
  BlockDecomposition d = from_blocks(scalar1(1.0), scalar1(0.0), scalar1(2.0),
                                     scalar1(0.0), scalar1(1.0));
  ShiftResult t = minimal_shift(d);
  REQUIRE(t.attainable);
  CHECK(t.value == 0.0);
  ShiftResult suff = sufficient_shift(d);
  REQUIRE(suff.attainable);
  CHECK(suff.value <= 0.0);
  CHECK(min_eigenvalue(d.shifted(0.0)) >= -1e-12);
}

TEST_CASE("the closed-form bound dominates the minimal shift in its regime") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    MatrixXcd g_x = rng.ginibre(2, 2), g_y = rng.ginibre(2, 2);
    MatrixXcd x33 = g_x * g_x.adjoint() + 0.2 * MatrixXcd::Identity(2, 2);
    MatrixXcd y22 = g_y * g_y.adjoint() + 0.2 * MatrixXcd::Identity(2, 2);
    MatrixXcd y23 = rng.ginibre(2, 2);
    // The bound is provable exactly for isotropic nonnegative Y33.
    MatrixXcd y33 = rng.uniform() * MatrixXcd::Identity(2, 2);
    BlockDecomposition d =
        from_blocks(x33, MatrixXcd::Zero(2, 2), y22, y23, y33);

    ShiftResult t_min = minimal_shift(d);
    ShiftResult t_suff = sufficient_shift(d);
    REQUIRE(t_min.attainable);
    REQUIRE(t_suff.attainable);
    if (t_suff.value >= 0.0) CHECK(t_suff.value >= t_min.value - 1e-12);
    CHECK(min_eigenvalue(d.shifted(std::max(t_suff.value, 0.0) + 1e-8)) >=
          -1e-10);

    // Positivity by direct spectrum agrees with the Schur criterion on
    // both sides of the crossing.
    for (double t : {t_min.value - 1e-3, t_min.value + 1e-8}) {
      if (t < 0.0) continue;
      bool direct = min_eigenvalue(d.shifted(t)) >= -1e-10;
      MatrixXcd schur = d.y23.adjoint() * d.y22.llt().solve(d.y23);
      bool criterion =
          min_eigenvalue(MatrixXcd(t * d.x33 + d.y33 - schur)) >= -1e-10;
      CHECK(direct == criterion);
    }
  }
}

TEST_CASE("positive-definiteness preconditions are enforced") {
  BlockDecomposition d = from_blocks(scalar1(0.0), scalar1(0.0), scalar1(2.0),
                                     scalar1(1.0), scalar1(0.0));
  CHECK_THROWS_WITH_AS(minimal_shift(d), doctest::Contains("X33"),
                       PreconditionError);
  BlockDecomposition e = from_blocks(scalar1(1.0), scalar1(0.0), scalar1(0.0),
                                     scalar1(0.0), scalar1(0.0));
  CHECK_THROWS_WITH_AS(sufficient_shift(e), doctest::Contains("Y22"),
                       PreconditionError);
}

TEST_CASE("the two-qubit pipeline reproduces the hand-computed shifts") {
  ShiftPipelineFixture fixture = shift_pipeline_fixture();
  MatrixXcd h_v = assemble_hamiltonian(fixture.v);
  MatrixXcd h_w = assemble_hamiltonian(fixture.w);

  // H_V is the exposing Hamiltonian: a polar-cone member whose ground
  // space is exactly A.
  CHECK(polar_cone_membership(fixture.v).member);
  ExposedFace face = exposed_face(fixture.v);
  CHECK(face.dimension() == 2);
  CHECK(max_principal_cosine(face.ground_space, fixture.subspace_a) ==
        doctest::Approx(1.0));

  BlockDecomposition d =
      block_decompose(h_v, h_w, fixture.subspace_a, fixture.subspace_b);
  CHECK(d.dims == std::array<int, 3>{1, 1, 2});

  ShiftResult t_min = minimal_shift(d);
  REQUIRE(t_min.attainable);
  CHECK(t_min.value == doctest::Approx(0.5));
  CHECK(min_eigenvalue(d.shifted(0.5 - 1e-3)) < -1e-6);
  CHECK(min_eigenvalue(d.shifted(0.5 + 1e-8)) >= -1e-10);

  // The Y33 block diag(-0.5, 0.5) is not isotropic, so the closed-form
  // value lands below the true crossing; it is reported, not trusted.
  ShiftResult t_suff = sufficient_shift(d);
  REQUIRE(t_suff.attainable);
  CHECK(t_suff.value == doctest::Approx(-0.5));
  CHECK(min_eigenvalue(d.shifted(0.0)) < -1e-6);
}

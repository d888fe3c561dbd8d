// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/rng.hpp"
#include "qmarg/spaces.hpp"

using namespace qmarg;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

MatrixXcd pauli(char c) {
  MatrixXcd m(2, 2);
  const std::complex<double> i(0.0, 1.0);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: REQUIRE(false);
  }
  return m;
}

MatrixXcd pauli_string(const std::string& s) {
  MatrixXcd out = pauli(s[0]);
  for (std::size_t k = 1; k < s.size(); ++k) out = kron(out, pauli(s[k]));
  return out;
}

// Swap of two d-level tensor factors, lifted to N factors.
MatrixXcd swap_operator(int p, int q, int d, int N) {
  MatrixXcd s = MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return embed_operator(s, {p, q}, d, N);
}

}  // namespace

TEST_CASE("sector dimensions follow the counting formulas") {
  CHECK(sector_dimension(2, 3, SectorKind::Full) == 8);
  CHECK(sector_dimension(2, 3, SectorKind::Symmetric) == 4);
  CHECK(sector_dimension(3, 2, SectorKind::Symmetric) == 6);
  CHECK(sector_dimension(4, 2, SectorKind::Antisymmetric) == 6);
  CHECK(sector_dimension(3, 3, SectorKind::Antisymmetric) == 1);
  CHECK(sector_dimension(6, 3, SectorKind::Antisymmetric) == 20);
  CHECK(Sector(2, 5, SectorKind::Full).ambient_dimension() == 32);
  CHECK(Sector(2, 12, SectorKind::Symmetric).dimension() == 13);
}

TEST_CASE("invalid sector parameters are rejected") {
  CHECK_THROWS_AS(Sector(0, 2, SectorKind::Full), ValidationError);
  CHECK_THROWS_AS(Sector(2, 0, SectorKind::Full), ValidationError);
  CHECK_THROWS_AS(Sector(2, 3, SectorKind::Antisymmetric), ValidationError);
  CHECK_THROWS_AS(sector_dimension(2, 3, SectorKind::Antisymmetric),
                  ValidationError);
}

TEST_CASE("the ambient-dimension guard rejects oversized sectors") {
  CHECK_NOTHROW(Sector(2, 12, SectorKind::Full));     // exactly 4096
  CHECK_THROWS_AS(Sector(2, 13, SectorKind::Full), GuardError);
  CHECK_THROWS_AS(Sector(3, 8, SectorKind::Full), GuardError);
  // The guard is on the ambient space, so small sectors of huge ambient
  // spaces are still rejected rather than silently truncated.
  CHECK_THROWS_AS(Sector(2, 13, SectorKind::Symmetric), GuardError);
  CHECK_THROWS_AS(Sector(100, 100, SectorKind::Full), GuardError);
}

TEST_CASE("basis labels enumerate words in lexicographic order") {
  const auto full = basis_labels(Sector(2, 2, SectorKind::Full));
  REQUIRE(full.size() == 4);
  CHECK(full[0] == BasisLabel{1, 1});
  CHECK(full[1] == BasisLabel{1, 2});
  CHECK(full[2] == BasisLabel{2, 1});
  CHECK(full[3] == BasisLabel{2, 2});

  const auto sym = basis_labels(Sector(2, 3, SectorKind::Symmetric));
  REQUIRE(sym.size() == 4);
  CHECK(sym[0] == BasisLabel{1, 1, 1});
  CHECK(sym[1] == BasisLabel{1, 1, 2});
  CHECK(sym[2] == BasisLabel{1, 2, 2});
  CHECK(sym[3] == BasisLabel{2, 2, 2});

  const auto anti = basis_labels(Sector(4, 2, SectorKind::Antisymmetric));
  REQUIRE(anti.size() == 6);
  CHECK(anti[0] == BasisLabel{1, 2});
  CHECK(anti[1] == BasisLabel{1, 3});
  CHECK(anti[2] == BasisLabel{1, 4});
  CHECK(anti[3] == BasisLabel{2, 3});
  CHECK(anti[4] == BasisLabel{2, 4});
  CHECK(anti[5] == BasisLabel{3, 4});
}

TEST_CASE("label_index inverts basis_labels and rejects foreign labels") {
  for (auto kind : {SectorKind::Full, SectorKind::Symmetric,
                    SectorKind::Antisymmetric}) {
    const Sector sec(3, 2, kind);
    const auto labels = basis_labels(sec);
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
      CHECK(label_index(sec, labels[i]) == i);
    }
  }
  CHECK_THROWS_AS(
      label_index(Sector(2, 2, SectorKind::Symmetric), BasisLabel{2, 1}),
      ValidationError);
}

TEST_CASE("embedding isometries have orthonormal columns") {
  for (const Sector& sec :
       {Sector(2, 3, SectorKind::Symmetric), Sector(3, 2, SectorKind::Symmetric),
        Sector(4, 2, SectorKind::Antisymmetric),
        Sector(5, 3, SectorKind::Antisymmetric), Sector(2, 2, SectorKind::Full)}) {
    const MatrixXcd E = embedding_isometry(sec);
    REQUIRE(E.rows() == sec.ambient_dimension());
    REQUIRE(E.cols() == sec.dimension());
    const MatrixXcd gram = E.adjoint() * E;
    CHECK((gram - MatrixXcd::Identity(E.cols(), E.cols())).cwiseAbs().maxCoeff()
          <= 1e-14);
  }
}

TEST_CASE("embedded vectors transform correctly under factor exchange") {
  Rng rng(7);
  {
    const Sector sec(3, 3, SectorKind::Symmetric);
    const MatrixXcd E = embedding_isometry(sec);
    const VectorXcd v = E * rng.haar_state(sec.dimension());
    for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
      CHECK((swap_operator(p, q, 3, 3) * v - v).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
  {
    const Sector sec(4, 3, SectorKind::Antisymmetric);
    const MatrixXcd E = embedding_isometry(sec);
    const VectorXcd v = E * rng.haar_state(sec.dimension());
    for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
      CHECK((swap_operator(p, q, 4, 3) * v + v).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
}

TEST_CASE("embedding columns carry the expected amplitudes") {
  {
    const Sector sec(2, 2, SectorKind::Symmetric);
    const MatrixXcd E = embedding_isometry(sec);
    const int col = label_index(sec, {1, 2});
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(E(1, col) - s) <= 1e-15);  // |12>
    CHECK(std::abs(E(2, col) - s) <= 1e-15);  // |21>
    CHECK(std::abs(E(0, col)) <= 1e-15);
    CHECK(std::abs(E(3, col)) <= 1e-15);
  }
  {
    const Sector sec(2, 2, SectorKind::Antisymmetric);
    const MatrixXcd E = embedding_isometry(sec);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(E(1, 0) - s) <= 1e-15);   // +|12>
    CHECK(std::abs(E(2, 0) + s) <= 1e-15);   // -|21>
  }
  {
    // Repeated levels scale by the number of distinct rearrangements.
    const Sector sec(2, 3, SectorKind::Symmetric);
    const MatrixXcd E = embedding_isometry(sec);
    const int col = label_index(sec, {1, 1, 2});
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(E(1, col) - s) <= 1e-15);  // |112>
    CHECK(std::abs(E(2, col) - s) <= 1e-15);  // |121>
    CHECK(std::abs(E(4, col) - s) <= 1e-15);  // |211>
  }
}

TEST_CASE("pure states validate their length and norm") {
  const Sector sec(2, 2, SectorKind::Full);
  VectorXcd good(4);
  good << 1, 0, 0, 0;
  CHECK_NOTHROW(PureState(sec, good));
  VectorXcd unnormalized(4);
  unnormalized << 1, 1, 0, 0;
  CHECK_THROWS_AS(PureState(sec, unnormalized), ValidationError);
  VectorXcd short_vec(3);
  short_vec << 1, 0, 0;
  CHECK_THROWS_AS(PureState(sec, short_vec), ValidationError);
}

TEST_CASE("slater states occupy the requested levels") {
  const Sector sec(4, 2, SectorKind::Antisymmetric);
  const PureState s = slater_state(sec, {3, 1});
  CHECK(s.amplitudes(label_index(sec, {1, 3})) == std::complex<double>(1.0));
  CHECK(s.amplitudes.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK_THROWS_AS(slater_state(sec, {2, 2}), ValidationError);
  CHECK_THROWS_AS(slater_state(Sector(2, 2, SectorKind::Full), {1, 2}),
                  PreconditionError);
}

TEST_CASE("the symmetric qubit pair differing only in a relative sign") {
  auto [plus, minus] = ghz_pair(3);
  CHECK(plus.sector == Sector(2, 3, SectorKind::Symmetric));
  CHECK(std::abs(plus.amplitudes(0) - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(plus.amplitudes(3) - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(minus.amplitudes(3) + 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(plus.amplitudes.dot(minus.amplitudes)) <= 1e-15);
}

TEST_CASE("particle-hole duality is a signed permutation and an involution") {
  const Sector sec(4, 2, SectorKind::Antisymmetric);
  const ParticleHoleMap ph = particle_hole_map(sec);
  CHECK(ph.source == sec);
  CHECK(ph.target == sec);  // complement of 2 in 4 is again 2
  const MatrixXcd& M = ph.matrix;
  // Signed permutation: one entry of modulus 1 per row and column.
  for (int i = 0; i < M.rows(); ++i) {
    CHECK(M.row(i).cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(M.col(i).cwiseAbs().sum() == doctest::Approx(1.0));
  }
  // Unitary, and squares to the parity sign (-1)^(N(d-N)) = +1 here.
  CHECK((M.adjoint() * M - MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff()
        <= 1e-15);
  CHECK((M * M - MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-15);

  const ParticleHoleMap odd = particle_hole_map(Sector(4, 1, SectorKind::Antisymmetric));
  CHECK(odd.target == Sector(4, 3, SectorKind::Antisymmetric));
  const MatrixXcd round_trip =
      particle_hole_map(odd.target).matrix * odd.matrix;
  CHECK((round_trip + MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff()
        <= 1e-15);  // (-1)^(1*3) = -1
}

TEST_CASE("hole marginals complement particle marginals exactly") {
  const Sector sec(4, 2, SectorKind::Antisymmetric);
  const ParticleHoleMap ph = particle_hole_map(sec);
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const PureState psi(sec, rng.haar_state(sec.dimension()));
    const PureState hole = ph.apply(psi);
    const MatrixXcd rho1 = partial_trace(psi, IndexSubset({1})).entries();
    const MatrixXcd q1 = partial_trace(hole, IndexSubset({1})).entries();
    const MatrixXcd expected =
        (MatrixXcd::Identity(4, 4) - 2.0 * rho1) / 2.0;
    CHECK((q1 - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("five-qubit codewords are orthonormal stabilizer eigenvectors") {
  auto [zero, one] = five_qubit_code();
  CHECK(zero.sector == Sector(2, 5, SectorKind::Full));
  CHECK(std::abs(zero.amplitudes.norm() - 1.0) <= 1e-13);
  CHECK(std::abs(one.amplitudes.norm() - 1.0) <= 1e-13);
  CHECK(std::abs(zero.amplitudes.dot(one.amplitudes)) <= 1e-13);

  const std::vector<std::string> generators = {"XZZXI", "IXZZX", "XIXZZ",
                                               "ZXIXZ"};
  for (const auto& g : generators) {
    const MatrixXcd G = pauli_string(g);
    CHECK((G * zero.amplitudes - zero.amplitudes).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((G * one.amplitudes - one.amplitudes).cwiseAbs().maxCoeff() <= 1e-13);
  }
  // The all-Z string acts as the logical phase flip.
  const MatrixXcd Zbar = pauli_string("ZZZZZ");
  CHECK((Zbar * zero.amplitudes - zero.amplitudes).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((Zbar * one.amplitudes + one.amplitudes).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("five-qubit codeword amplitudes match the published expansion") {
  auto [zero, one] = five_qubit_code();
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(32);
  const double q = 0.25;
  for (int idx : {0, 18, 9, 20, 10, 5}) expected(idx) = q;
  for (int idx : {27, 6, 24, 29, 3, 30, 15, 17, 12, 23}) expected(idx) = -q;
  CHECK((zero.amplitudes - expected).cwiseAbs().maxCoeff() <= 1e-14);
  // The second codeword is the first with every qubit flipped.
  for (int idx = 0; idx < 32; ++idx) {
    CHECK(std::abs(one.amplitudes(idx) - expected(31 - idx)) <= 1e-14);
  }
}

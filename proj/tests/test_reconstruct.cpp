// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/reconstruct.hpp"
#include "qmarg/rng.hpp"
#include "qmarg/spaces.hpp"

using namespace qmarg;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

ReconstructionResult reconstruct_pair(const PureState& psi, const IndexSubset& J,
                                      const IndexSubset& Jp) {
  return diosi_reconstruct(partial_trace(psi, J), partial_trace(psi, Jp),
                           psi.sector, J, Jp);
}

}  // namespace

TEST_CASE("generic three-qubit states are reconstructed uniquely") {
  Sector sector(2, 3, SectorKind::Full);
  const IndexSubset J({1, 2}), Jp({2, 3});
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    PureState psi(sector, rng.haar_state(8));
    ReconstructionResult res = reconstruct_pair(psi, J, Jp);
    REQUIRE(res.status == ReconstructionStatus::Unique);
    REQUIRE(res.state.has_value());
    CHECK(state_fidelity(res.state->amplitudes, psi.amplitudes) >= 1.0 - 1e-8);
    CHECK(res.residual <= 1e-8);
    for (Eigen::Index i = 0; i < res.phase_solution.size(); ++i)
      CHECK(std::abs(std::abs(res.phase_solution(i)) - 1.0) <= 1e-6);
    CHECK(res.system_rows == 8);
    CHECK(res.system_cols <= 4);  // two rank-2 parts
  }
}

TEST_CASE("interleaved and larger subset covers reconstruct as well") {
  Sector sector(2, 4, SectorKind::Full);
  Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    PureState psi(sector, rng.haar_state(16));

    ReconstructionResult contiguous =
        reconstruct_pair(psi, IndexSubset({1, 2, 3}), IndexSubset({2, 3, 4}));
    REQUIRE(contiguous.status == ReconstructionStatus::Unique);
    CHECK(state_fidelity(contiguous.state->amplitudes, psi.amplitudes) >=
          1.0 - 1e-8);
    CHECK(contiguous.system_rows == 16);

    ReconstructionResult interleaved =
        reconstruct_pair(psi, IndexSubset({1, 3}), IndexSubset({2, 3, 4}));
    REQUIRE(interleaved.status == ReconstructionStatus::Unique);
    CHECK(state_fidelity(interleaved.state->amplitudes, psi.amplitudes) >=
          1.0 - 1e-8);
  }
}

TEST_CASE("product states reconstruct from rank-one parts") {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(9);
  VectorXcd a = rng.haar_state(2), b = rng.haar_state(2), c = rng.haar_state(2);
  VectorXcd amps(8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) amps(4 * i + 2 * j + k) = a(i) * b(j) * c(k);
  PureState psi(sector, amps);
  ReconstructionResult res =
      reconstruct_pair(psi, IndexSubset({1, 2}), IndexSubset({2, 3}));
  REQUIRE(res.status == ReconstructionStatus::Unique);
  CHECK(res.system_cols == 2);
  CHECK(state_fidelity(res.state->amplitudes, psi.amplitudes) >= 1.0 - 1e-10);
}

TEST_CASE("the W state is reconstructed; its spectrum is safely gapped") {
  Sector sector(2, 3, SectorKind::Full);
  VectorXcd amps = VectorXcd::Zero(8);
  amps(1) = amps(2) = amps(4) = 1.0 / std::sqrt(3.0);
  PureState w(sector, amps);
  ReconstructionResult res =
      reconstruct_pair(w, IndexSubset({1, 2}), IndexSubset({2, 3}));
  REQUIRE(res.status == ReconstructionStatus::Unique);
  CHECK(state_fidelity(res.state->amplitudes, w.amplitudes) >= 1.0 - 1e-8);
}

TEST_CASE("the GHZ state is refused as degenerate") {
  Sector sector(2, 3, SectorKind::Full);
  VectorXcd amps = VectorXcd::Zero(8);
  amps(0) = amps(7) = 1.0 / std::sqrt(2.0);
  PureState ghz(sector, amps);
  ReconstructionResult res =
      reconstruct_pair(ghz, IndexSubset({1, 2}), IndexSubset({2, 3}));
  CHECK(res.status == ReconstructionStatus::Degenerate);
  CHECK_FALSE(res.state.has_value());
}

TEST_CASE("parts of two different states are inconsistent") {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(13);
  PureState one(sector, rng.haar_state(8));
  PureState two(sector, rng.haar_state(8));
  ReconstructionResult res = diosi_reconstruct(
      partial_trace(one, IndexSubset({1, 2})),
      partial_trace(two, IndexSubset({2, 3})), sector, IndexSubset({1, 2}),
      IndexSubset({2, 3}));
  CHECK(res.status == ReconstructionStatus::Inconsistent);
  CHECK_FALSE(res.state.has_value());
}

TEST_CASE("marginals of a mixed state are refused as inconsistent") {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(17);
  VectorXcd u = rng.haar_state(8), v = rng.haar_state(8);
  MatrixXcd mixed = 0.6 * u * u.adjoint() + 0.4 * v * v.adjoint();
  const IndexSubset J({1, 2}), Jp({2, 3});
  ReconstructionResult res = diosi_reconstruct(
      DensityMatrix(partial_trace(sector, mixed, J)),
      DensityMatrix(partial_trace(sector, mixed, Jp)), sector, J, Jp);
  CHECK(res.status == ReconstructionStatus::Inconsistent);
}

TEST_CASE("a global phase on the hidden state changes nothing") {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(23);
  VectorXcd amps = rng.haar_state(8);
  PureState psi(sector, amps);
  PureState phased(sector, std::exp(std::complex<double>(0.0, 0.37)) * amps);
  const IndexSubset J({1, 2}), Jp({2, 3});

  // The phase is invisible to the marginals themselves...
  CHECK((partial_trace(psi, J).entries() - partial_trace(phased, J).entries())
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  // ...so verdict, residual and the state up to phase all coincide.
  ReconstructionResult a = reconstruct_pair(psi, J, Jp);
  ReconstructionResult b = reconstruct_pair(phased, J, Jp);
  REQUIRE(a.status == ReconstructionStatus::Unique);
  REQUIRE(b.status == ReconstructionStatus::Unique);
  CHECK(a.residual == doctest::Approx(b.residual).epsilon(1e-12));
  CHECK(state_fidelity(a.state->amplitudes, b.state->amplitudes) >=
        1.0 - 1e-10);
}

TEST_CASE("hypothesis violations are rejected before any verdict") {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(3);
  PureState psi(sector, rng.haar_state(8));
  DensityMatrix p1 = partial_trace(psi, IndexSubset({1}));
  DensityMatrix p12 = partial_trace(psi, IndexSubset({1, 2}));
  DensityMatrix p23 = partial_trace(psi, IndexSubset({2, 3}));

  // Disjoint subsets.
  CHECK_THROWS_WITH_AS(diosi_reconstruct(p1, p23, sector, IndexSubset({1}),
                                         IndexSubset({2, 3})),
                       doctest::Contains("overlap"), PreconditionError);
  // Non-covering subsets.
  CHECK_THROWS_WITH_AS(diosi_reconstruct(p12, partial_trace(psi, IndexSubset({2})),
                                         sector, IndexSubset({1, 2}),
                                         IndexSubset({2})),
                       doctest::Contains("cover"), PreconditionError);
  // Improper subset.
  CHECK_THROWS_WITH_AS(
      diosi_reconstruct(DensityMatrix(psi.amplitudes * psi.amplitudes.adjoint()),
                        p23, sector, IndexSubset({1, 2, 3}), IndexSubset({2, 3})),
      doctest::Contains("proper"), PreconditionError);
  // Wrong part dimension.
  CHECK_THROWS_AS(diosi_reconstruct(p1, p23, sector, IndexSubset({1, 2}),
                                    IndexSubset({2, 3})),
                  ValidationError);
  // Exchange sectors are out of scope.
  Sector sym(2, 3, SectorKind::Symmetric);
  CHECK_THROWS_AS(diosi_reconstruct(p12, p23, sym, IndexSubset({1, 2}),
                                    IndexSubset({2, 3})),
                  PreconditionError);
}

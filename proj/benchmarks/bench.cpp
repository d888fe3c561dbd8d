// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "qmarg/facegeom.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/reconstruct.hpp"
#include "qmarg/rng.hpp"
#include "qmarg/spaces.hpp"

namespace {

using namespace qmarg;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void BM_PartialTrace(benchmark::State& state) {
  Sector sector(2, int(state.range(0)), SectorKind::Full);
  Rng rng(1);
  PureState psi(sector, rng.haar_state(sector.dimension()));
  IndexSubset keep({1, 2});
  for (auto _ : state)
    benchmark::DoNotOptimize(partial_trace(psi, keep));
}
BENCHMARK(BM_PartialTrace)->Arg(4)->Arg(6)->Arg(8);

void BM_GammaMatrix(benchmark::State& state) {
  Sector sector(2, int(state.range(0)), SectorKind::Symmetric);
  auto subsets = all_subsets(sector.N(), sector.N() - 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(gamma_matrix(sector, subsets));
}
BENCHMARK(BM_GammaMatrix)->Arg(3)->Arg(5)->Arg(7);

void BM_GammaKernel(benchmark::State& state) {
  Sector sector(2, int(state.range(0)), SectorKind::Symmetric);
  auto subsets = all_subsets(sector.N(), sector.N() - 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(gamma_kernel(sector, subsets));
}
BENCHMARK(BM_GammaKernel)->Arg(3)->Arg(5)->Arg(7);

void BM_PreimageFace(benchmark::State& state) {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(2);
  PureState psi(sector, rng.haar_state(8));
  MarginalVector q = marginal_vector(psi, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(preimage_face(q, 3));
}
BENCHMARK(BM_PreimageFace);

void BM_SchmidtDecompose(benchmark::State& state) {
  Sector sector(2, int(state.range(0)), SectorKind::Full);
  Rng rng(3);
  PureState psi(sector, rng.haar_state(sector.dimension()));
  IndexSubset j({1, 2});
  for (auto _ : state)
    benchmark::DoNotOptimize(schmidt_decompose(psi, j));
}
BENCHMARK(BM_SchmidtDecompose)->Arg(4)->Arg(6)->Arg(8);

void BM_DiosiReconstruct(benchmark::State& state) {
  Sector sector(2, 3, SectorKind::Full);
  Rng rng(4);
  PureState psi(sector, rng.haar_state(8));
  IndexSubset j12({1, 2}), j23({2, 3});
  DensityMatrix rho12 = partial_trace(psi, j12);
  DensityMatrix rho23 = partial_trace(psi, j23);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        diosi_reconstruct(rho12, rho23, sector, j12, j23));
}
BENCHMARK(BM_DiosiReconstruct);

}  // namespace

BENCHMARK_MAIN();

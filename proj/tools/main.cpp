// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line surface.  Every subcommand prints one JSON document per
// line on stdout (all of them parse back through the library's document
// readers); diagnostics go to stderr.  Exit codes: 0 success, 2 infeasible
// or inconsistent input, 3 malformed input, 4 size-guard violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qmarg/cone.hpp"
#include "qmarg/errors.hpp"
#include "qmarg/facegeom.hpp"
#include "qmarg/io.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/reconstruct.hpp"
#include "qmarg/rng.hpp"
#include "qmarg/spaces.hpp"

namespace {

using namespace qmarg;
using nlohmann::json;
using Eigen::MatrixXcd;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string verdict_line(json payload) {
  json doc{{"kind", "verdict"},
           {"payload", std::move(payload)},
           {"schema_version", "1"}};
  return doc.dump();
}

// Marginal data from a document of kind state, density or marginal_vector.
// A density needs --sector and --m to place the single part on the uniform
// subset family; a state needs --m.
MarginalVector load_marginal_vector(const std::string& path,
                                    const std::string& sector_flag, int m,
                                    const Tolerances& tol) {
  const std::string text = slurp(path);
  const std::string kind = document_kind(text);
  if (kind == "marginal_vector") {
    MarginalVector q = parse_marginal_vector(text, tol);
    if (!sector_flag.empty() && parse_sector_flag(sector_flag) != q.sector)
      throw ValidationError("--sector disagrees with the document's sector");
    return q;
  }
  if (kind == "state") {
    if (m <= 0)
      throw ValidationError("a state document needs --m to pick the subset size");
    return marginal_vector(parse_state(text, tol), m);
  }
  if (kind == "density") {
    if (sector_flag.empty() || m <= 0)
      throw ValidationError(
          "a density document needs --sector and --m to become marginal data");
    Sector sector = parse_sector_flag(sector_flag);
    DensityMatrix part = parse_density(text, tol);
    std::vector<IndexSubset> subsets = all_subsets(sector.N(), m);
    std::vector<DensityMatrix> parts(subsets.size(), part);
    return make_marginal_vector(sector, std::move(subsets), std::move(parts));
  }
  throw ValidationError("document kind '" + kind +
                        "' does not describe marginal data");
}

int cmd_trace(const std::string& input, const std::string& subset_flag,
              const std::string& sector_flag, const Tolerances& tol) {
  const std::string text = slurp(input);
  const std::string kind = document_kind(text);
  IndexSubset subset = parse_subset_flag(subset_flag);
  if (kind == "state") {
    PureState state = parse_state(text, tol);
    std::cout << serialize(partial_trace(state, subset)) << "\n";
    return 0;
  }
  if (kind == "density") {
    if (sector_flag.empty())
      throw ValidationError("tracing a density document needs --sector");
    Sector sector = parse_sector_flag(sector_flag);
    DensityMatrix rho = parse_density(text, tol);
    if (rho.dimension() != sector.dimension())
      throw ValidationError("the density does not act on the given sector");
    std::cout << serialize(DensityMatrix(
                     partial_trace(sector, rho.entries(), subset), tol))
              << "\n";
    return 0;
  }
  throw ValidationError("document kind '" + kind + "' has no partial trace");
}

int cmd_kernel(const std::string& sector_flag, int m,
               const std::vector<std::string>& subset_flags,
               const Tolerances& tol) {
  Sector sector = parse_sector_flag(sector_flag);
  std::vector<IndexSubset> subsets;
  if (!subset_flags.empty()) {
    for (const std::string& flag : subset_flags)
      subsets.push_back(parse_subset_flag(flag));
  } else {
    if (m <= 0) throw ValidationError("kernel needs --m or explicit --subset");
    subsets = all_subsets(sector.N(), m);
  }
  std::cout << serialize(gamma_kernel(sector, std::move(subsets), tol)) << "\n";
  return 0;
}

int cmd_extreme(const std::string& input, const std::string& sector_flag,
                int m, std::uint64_t seed, const Tolerances& tol) {
  MarginalVector q = load_marginal_vector(input, sector_flag, m, tol);
  ExtremalityVerdict verdict = is_extreme_marginal(q, seed, tol);
  std::cout << serialize(verdict) << "\n";
  return 0;
}

int cmd_preimage(const std::string& input, const std::string& sector_flag,
                 int m, std::uint64_t seed, const Tolerances& tol) {
  MarginalVector q = load_marginal_vector(input, sector_flag, m, tol);
  PreimageFace face = preimage_face(q, seed, tol);
  UniquenessReport report = unique_preimage_check(q, seed, tol);
  std::cout << serialize(face) << "\n";
  std::cout << verdict_line(
                   json{{"preimage_dimension", report.preimage_dimension},
                        {"theorem_applies", report.theorem_applies},
                        {"verdict", report.unique ? "unique" : "multiple"}})
            << "\n";
  return 0;
}

int cmd_reconstruct(const std::string& sector_flag, const std::string& input_j,
                    const std::string& input_jp, const std::string& subset_j,
                    const std::string& subset_jp, const Tolerances& tol) {
  Sector sector = parse_sector_flag(sector_flag);
  DensityMatrix rho_j = parse_density(slurp(input_j), tol);
  DensityMatrix rho_jp = parse_density(slurp(input_jp), tol);
  ReconstructionResult result =
      diosi_reconstruct(rho_j, rho_jp, sector, parse_subset_flag(subset_j),
                        parse_subset_flag(subset_jp), tol);
  std::cout << serialize(result, sector) << "\n";
  return result.status == ReconstructionStatus::Unique ? 0 : 2;
}

int cmd_erdahl_shift(const std::string& fixture, const std::string& input,
                     const Tolerances& tol) {
  BlockDecomposition d;
  if (!input.empty()) {
    d = parse_decomposition(slurp(input), tol);
  } else if (fixture == "glitch") {
    d = glitch_fixture();
  } else if (fixture == "pipeline") {
    ShiftPipelineFixture pipeline = shift_pipeline_fixture();
    d = block_decompose(assemble_hamiltonian(pipeline.v),
                        assemble_hamiltonian(pipeline.w), pipeline.subspace_a,
                        pipeline.subspace_b, tol);
  } else {
    throw ValidationError("erdahl-shift needs --input or --fixture");
  }
  std::cout << serialize(d) << "\n";

  ObstructionReport obstruction = y13_obstruction(d, tol);
  json payload{{"norm_y13", obstruction.norm_y13},
               {"verdict", obstruction.blocked ? "blocked" : "shiftable"}};
  if (obstruction.blocked) {
    // No t works; report the scan that certifies it.
    json grid = json::array();
    for (int p = 0; p <= 6; ++p) {
      double t = std::pow(10.0, p);
      grid.push_back(json::array({t, min_eigenvalue(d.shifted(t))}));
    }
    payload["grid"] = std::move(grid);
    payload["t_min"] = nullptr;
    payload["t_suff"] = nullptr;
  } else {
    ShiftResult t_min = minimal_shift(d, tol);
    ShiftResult t_suff = sufficient_shift(d, tol);
    payload["t_min"] = t_min.value;
    payload["t_suff"] = t_suff.value;
    payload["min_eigenvalue_at_t_min"] =
        min_eigenvalue(d.shifted(t_min.value + 1e-8));
  }
  std::cout << verdict_line(std::move(payload)) << "\n";
  return 0;
}

int cmd_pauli(const std::string& input, int n, const Tolerances& tol) {
  DensityMatrix rho1 = parse_density(slurp(input), tol);
  PauliReport report = pauli_check(rho1.entries(), n, tol);
  json eigenvalues = json::array();
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
    eigenvalues.push_back(report.eigenvalues(i));
  std::cout << verdict_line(
                   json{{"bound", 1.0 / n},
                        {"eigenvalues", std::move(eigenvalues)},
                        {"verdict",
                         report.satisfied ? "satisfied" : "violated"}})
            << "\n";
  return report.satisfied ? 0 : 2;
}

int cmd_demo_ghz(int n, const Tolerances& tol) {
  auto [plus, minus] = ghz_pair(n);
  const int m = n - 1;
  MarginalVector q_plus = marginal_vector(plus, m);
  MarginalVector q_minus = marginal_vector(minus, m);
  double deviation = 0.0;
  for (std::size_t i = 0; i < q_plus.subsets.size(); ++i)
    deviation = std::max(deviation,
                         (q_plus.parts[i].entries() - q_minus.parts[i].entries())
                             .cwiseAbs()
                             .maxCoeff());
  KernelBasis kernel = gamma_kernel(plus.sector, all_subsets(n, m), tol);
  std::cout << serialize(q_plus) << "\n";
  std::cout << serialize(q_minus) << "\n";
  std::cout << serialize(kernel) << "\n";
  std::cout << verdict_line(json{{"kernel_dimension", kernel.dimension()},
                                 {"marginal_deviation", deviation},
                                 {"verdict", "ghz_demo"}})
            << "\n";
  return 0;
}

int cmd_demo_phd(int d, int n, std::uint64_t seed, const Tolerances& tol) {
  Sector sector(d, n, SectorKind::Antisymmetric);
  ParticleHoleMap duality = particle_hole_map(sector);
  ContractionMap gamma = gamma_matrix(sector, all_subsets(n, 1));
  KernelBasis kernel = gamma_kernel(sector, all_subsets(n, 1), tol);
  Rng rng(seed);
  double residual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    PureState psi(sector, rng.haar_state(sector.dimension()), tol);
    MatrixXcd rho1 = partial_trace(psi, IndexSubset({1})).entries();
    PureState hole = duality.apply(psi);
    MatrixXcd q1 = partial_trace(hole, IndexSubset({1})).entries();
    MatrixXcd expected =
        (MatrixXcd::Identity(d, d) - double(n) * rho1) / double(d - n);
    residual = std::max(residual, (q1 - expected).cwiseAbs().maxCoeff());
  }
  std::cout << verdict_line(json{{"gamma_rank", gamma.rank()},
                                 {"hole_identity_residual", residual},
                                 {"kernel_dimension", kernel.dimension()},
                                 {"verdict", "phd_demo"}})
            << "\n";
  return 0;
}

int cmd_demo_qecc(const Tolerances& tol) {
  auto [zero, one] = five_qubit_code();
  double transition_norm = 0.0;
  double identity_deviation = 0.0;
  for (const IndexSubset& subset : all_subsets(5, 2)) {
    transition_norm = std::max(
        transition_norm,
        transition_rdm(zero, one, subset).cwiseAbs().maxCoeff());
    MatrixXcd quarter = 0.25 * MatrixXcd::Identity(4, 4);
    identity_deviation = std::max(
        identity_deviation,
        (partial_trace(zero, subset).entries() - quarter).cwiseAbs().maxCoeff());
    identity_deviation = std::max(
        identity_deviation,
        (partial_trace(one, subset).entries() - quarter).cwiseAbs().maxCoeff());
  }
  double range_cosine = 0.0;
  for (const IndexSubset& subset : all_subsets(5, 3)) {
    MatrixXcd range_zero = orthonormal_range(
        partial_trace(zero, subset).entries(), tol.rank_cut);
    MatrixXcd range_one = orthonormal_range(
        partial_trace(one, subset).entries(), tol.rank_cut);
    range_cosine =
        std::max(range_cosine, max_principal_cosine(range_zero, range_one));
  }
  std::cout << verdict_line(json{{"max_identity_deviation", identity_deviation},
                                 {"max_range_cosine", range_cosine},
                                 {"max_transition_norm", transition_norm},
                                 {"verdict", "qecc_demo"}})
            << "\n";
  return 0;
}

int cmd_demo_bloch(const Tolerances& tol) {
  Sector sector(4, 2, SectorKind::Antisymmetric);
  Eigen::Vector4cd tied(0.0, 1.0, 1.0, 3.0);
  ExposedFace face = exposed_face(
      uniform_local_hamiltonian(sector, 1, MatrixXcd(tied.asDiagonal()), tol),
      tol);
  ContractionMap gamma = gamma_matrix(sector, all_subsets(2, 1));
  KernelBasis restricted = restricted_kernel(gamma, face.ground_space, tol);
  std::cout << verdict_line(
                   json{{"ground_dimension", face.dimension()},
                        {"ground_energy", face.ground_energy},
                        {"restricted_kernel_dimension", restricted.dimension()},
                        {"verdict", "bloch_demo"}})
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marginal consistency toolkit: partial traces, contraction "
               "kernels, face geometry, pure-state recovery and block-matrix "
               "shift analysis."};
  app.fallthrough();

  std::uint64_t seed = 0;
  Tolerances tol = default_tolerances();
  app.add_option("--seed", seed, "Seed for all randomized searches");
  app.add_option("--tol-structural", tol.structural,
                 "Hermiticity / norm / trace validation tolerance");
  app.add_option("--tol-psd-floor", tol.psd_floor,
                 "Allowed dip of density eigenvalues below zero");
  app.add_option("--tol-rank-cut", tol.rank_cut,
                 "Relative singular value cut for ranks and kernels");
  app.add_option("--tol-residual-target", tol.residual_target,
                 "Projection residual needed to count as converged");
  app.add_option("--tol-stall-threshold", tol.stall_threshold,
                 "Residual above which a stalled projection is infeasible");
  app.add_option("--tol-certificate", tol.certificate,
                 "Equality threshold for face certificates");
  app.add_option("--tol-range-orthogonality", tol.range_orthogonality,
                 "Principal-angle cosine treated as orthogonal");
  app.add_option("--tol-containment", tol.containment,
                 "Subspace containment / vanishing block tolerance");
  app.add_option("--tol-degeneracy-gap", tol.degeneracy_gap,
                 "Eigenvalue gap below which spectra count as degenerate");
  app.add_option("--tol-schmidt-group", tol.schmidt_group,
                 "Grouping width for Schmidt coefficient plateaus");
  app.add_option("--tol-unimodularity", tol.unimodularity,
                 "Allowed deviation of recovered phases from unit modulus");
  app.add_option("--tol-reproduction", tol.reproduction,
                 "How well recovered states must reproduce their marginals");
  app.add_option("--tol-ground-space", tol.ground_space,
                 "Width of the bottom eigenvalue band");
  app.add_option("--tol-max-iterations", tol.max_iterations,
                 "Projection iteration cap per start");
  app.add_option("--tol-starts", tol.starts,
                 "Number of random starts for face searches");

  std::string input, input2, sector_flag, subset_flag, subset2_flag, fixture;
  std::vector<std::string> subset_flags;
  int m = 0, n = 3, d = 4;

  CLI::App* trace = app.add_subcommand(
      "trace", "Partial trace of a state or density document");
  trace->add_option("--input", input, "state or density document")->required();
  trace->add_option("--subset", subset_flag, "positions to keep, e.g. 1,3")
      ->required();
  trace->add_option("--sector", sector_flag, "sector (kind:d:N) for densities");

  CLI::App* kernel = app.add_subcommand(
      "kernel", "Kernel of the contraction map on a subset family");
  kernel->add_option("--sector", sector_flag, "sector, e.g. sym:2:3")
      ->required();
  kernel->add_option("--m", m, "uniform subset size");
  kernel->add_option("--subset", subset_flags, "explicit subsets (repeatable)");

  CLI::App* extreme = app.add_subcommand(
      "extreme", "Extremality verdict for marginal data");
  extreme->add_option("--input", input, "marginal data document")->required();
  extreme->add_option("--sector", sector_flag, "sector for density inputs");
  extreme->add_option("--m", m, "subset size for state/density inputs");

  CLI::App* preimage = app.add_subcommand(
      "preimage", "Pre-image face and uniqueness report for marginal data");
  preimage->add_option("--input", input, "marginal data document")->required();
  preimage->add_option("--sector", sector_flag, "sector for density inputs");
  preimage->add_option("--m", m, "subset size for state/density inputs");

  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "Recover a pure state from two overlapping marginals");
  reconstruct->add_option("--sector", sector_flag, "full sector, e.g. full:2:3")
      ->required();
  reconstruct->add_option("--input", input, "density document for the first subset")
      ->required();
  reconstruct
      ->add_option("--input-2", input2, "density document for the second subset")
      ->required();
  reconstruct->add_option("--subset", subset_flag, "first subset, e.g. 1,2")
      ->required();
  reconstruct->add_option("--subset-2", subset2_flag, "second subset, e.g. 2,3")
      ->required();

  CLI::App* shift = app.add_subcommand(
      "erdahl-shift", "Block decomposition and shift bounds for a pair");
  shift->add_option("--fixture", fixture, "built-in instance")
      ->check(CLI::IsMember({"glitch", "pipeline"}));
  shift->add_option("--input", input, "decomposition document");

  CLI::App* pauli = app.add_subcommand(
      "pauli", "Occupation bound check for a one-body reduced state");
  pauli->add_option("--input", input, "density document")->required();
  pauli->add_option("--n", n, "particle number")->required();

  CLI::App* demo = app.add_subcommand("demo", "Built-in demonstrations");
  demo->require_subcommand(1);
  CLI::App* demo_ghz = demo->add_subcommand(
      "ghz", "Equal marginals and kernel direction for the GHZ pair");
  demo_ghz->add_option("--n", n, "number of qubits (default 3)");
  CLI::App* demo_phd = demo->add_subcommand(
      "phd", "Particle-hole duality and the hole-marginal identity");
  demo_phd->add_option("--d", d, "levels (default 4)");
  demo_phd->add_option("--n", n, "particles (default 3)");
  demo->add_subcommand("qecc",
                       "Five-qubit code marginal indistinguishability");
  demo->add_subcommand("bloch",
                       "Two-dimensional exposed ground space as a ball face");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (trace->parsed()) return cmd_trace(input, subset_flag, sector_flag, tol);
    if (kernel->parsed()) return cmd_kernel(sector_flag, m, subset_flags, tol);
    if (extreme->parsed())
      return cmd_extreme(input, sector_flag, m, seed, tol);
    if (preimage->parsed())
      return cmd_preimage(input, sector_flag, m, seed, tol);
    if (reconstruct->parsed())
      return cmd_reconstruct(sector_flag, input, input2, subset_flag,
                             subset2_flag, tol);
    if (shift->parsed()) return cmd_erdahl_shift(fixture, input, tol);
    if (pauli->parsed()) return cmd_pauli(input, n, tol);
    if (demo->parsed()) {
      if (demo_ghz->parsed()) return cmd_demo_ghz(n, tol);
      if (demo_phd->parsed()) return cmd_demo_phd(d, n, seed, tol);
      if (demo->get_subcommand("qecc")->parsed()) return cmd_demo_qecc(tol);
      if (demo->get_subcommand("bloch")->parsed()) return cmd_demo_bloch(tol);
    }
    std::cerr << "no subcommand selected\n";
    return 3;
  } catch (const GuardError& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return 4;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "undetermined: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

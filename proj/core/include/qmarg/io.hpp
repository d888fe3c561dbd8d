// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "qmarg/cone.hpp"
#include "qmarg/facegeom.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/reconstruct.hpp"
#include "qmarg/spaces.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

// JSON document model.  Every value is wrapped in the envelope
//   {"kind": <kind>, "payload": {...}, "schema_version": "1",
//    "sector": {"d": ..., "kind": ..., "n": ...}}
// with the sector entry present exactly for sector-borne kinds (state,
// marginal_vector, hamiltonian, kernel, face) and for verdicts that carry
// sector data.  Keys are emitted in lexicographic order, complex numbers as
// two-element arrays [re, im] with shortest round-trip decimals, so
// serialization is deterministic and round-trips are bit-exact for finite
// inputs.  Non-finite entries are rejected.
//
// Parsing re-validates the invariants of the target type (Hermiticity,
// trace, positivity, subset structure) and reports the failing quantity;
// malformed documents never produce repaired values.

// kind "state"
std::string serialize(const PureState& value);
PureState parse_state(const std::string& text,
                      const Tolerances& tol = default_tolerances());

// kind "density"
std::string serialize(const DensityMatrix& value);
DensityMatrix parse_density(const std::string& text,
                            const Tolerances& tol = default_tolerances());

// kind "marginal_vector"
std::string serialize(const MarginalVector& value);
MarginalVector parse_marginal_vector(const std::string& text,
                                     const Tolerances& tol = default_tolerances());

// kind "hamiltonian"
std::string serialize(const LocalHamiltonian& value);
LocalHamiltonian parse_hamiltonian(const std::string& text,
                                   const Tolerances& tol = default_tolerances());

// kind "kernel"
std::string serialize(const KernelBasis& value);
KernelBasis parse_kernel(const std::string& text,
                         const Tolerances& tol = default_tolerances());

// kind "face"
std::string serialize(const PreimageFace& value);
PreimageFace parse_face(const std::string& text,
                        const Tolerances& tol = default_tolerances());

// kind "verdict" -- a tagged union distinguished by the "verdict" field:
// extremality verdicts use extreme / not_extreme / undecided, recovery
// verdicts use unique / ambiguous / inconsistent / degenerate.
std::string serialize(const ExtremalityVerdict& value);
ExtremalityVerdict parse_extremality(const std::string& text,
                                     const Tolerances& tol = default_tolerances());
std::string serialize(const ReconstructionResult& value, const Sector& sector);
ReconstructionResult parse_reconstruction(
    const std::string& text, const Tolerances& tol = default_tolerances());

// kind "decomposition"
std::string serialize(const BlockDecomposition& value);
BlockDecomposition parse_decomposition(
    const std::string& text, const Tolerances& tol = default_tolerances());

// Envelope inspection: validates schema_version / kind / payload presence
// and returns the kind string without touching the payload.
std::string document_kind(const std::string& text);

// Sector descriptor in document and flag form ("anti:4:2", "full:2:3",
// "sym:2:5"; long kind names accepted too).
Sector parse_sector_flag(const std::string& flag);

// Subset in key form, e.g. "1,3" (sorted, 1-based).
IndexSubset parse_subset_flag(const std::string& flag);

}  // namespace qmarg

// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/io.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"

namespace qmarg {

namespace {

using nlohmann::json;  // keys sort lexicographically in this representation
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// ---- writing ----------------------------------------------------------

json encode_complex(const std::complex<double>& z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ValidationError(std::string("non-finite entry in ") + what);
  return json::array({z.real(), z.imag()});
}

json encode_vector(const VectorXcd& v, const char* what) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(encode_complex(v(i), what));
  return out;
}

json encode_matrix(const MatrixXcd& m, const char* what) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(encode_complex(m(i, j), what));
    rows.push_back(row);
  }
  return rows;
}

json encode_sector(const Sector& sector) {
  return json{{"d", sector.d()},
              {"kind", to_string(sector.kind())},
              {"n", sector.N()}};
}

json encode_parts(const std::vector<IndexSubset>& subsets,
                  const std::vector<DensityMatrix>& parts) {
  json out = json::object();
  for (std::size_t i = 0; i < subsets.size(); ++i)
    out[subsets[i].key()] = encode_matrix(parts[i].entries(), "a marginal part");
  return out;
}

std::string envelope(const char* kind, json payload,
                     std::optional<json> sector = std::nullopt) {
  json doc{{"kind", kind},
           {"payload", std::move(payload)},
           {"schema_version", "1"}};
  if (sector) doc["sector"] = std::move(*sector);
  return doc.dump();
}

// ---- reading ----------------------------------------------------------

json parse_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw ValidationError("the document is not well-formed JSON");
  return doc;
}

const json& expect(const json& node, const char* key, const char* where) {
  auto it = node.find(key);
  if (it == node.end())
    throw ValidationError(std::string("missing key '") + key + "' in " + where);
  return *it;
}

json open_envelope(const std::string& text, const char* kind) {
  json doc = parse_text(text);
  if (!doc.is_object()) throw ValidationError("the document is not an object");
  const json& version = expect(doc, "schema_version", "the document");
  if (!version.is_string() || version.get<std::string>() != "1")
    throw ValidationError("unsupported schema_version (expected \"1\")");
  const json& found = expect(doc, "kind", "the document");
  if (!found.is_string() || found.get<std::string>() != kind)
    throw ValidationError("the document kind is not '" + std::string(kind) +
                          "'");
  const json& payload = expect(doc, "payload", "the document");
  if (!payload.is_object())
    throw ValidationError("the payload is not an object");
  return doc;
}

double decode_real(const json& node, const char* what) {
  if (!node.is_number())
    throw ValidationError(std::string(what) + " is not a number");
  double value = node.get<double>();
  if (!std::isfinite(value))
    throw ValidationError(std::string(what) + " is not finite");
  return value;
}

std::complex<double> decode_complex(const json& node, const char* what) {
  if (!node.is_array() || node.size() != 2)
    throw ValidationError(std::string(what) +
                          " is not a two-element [re, im] array");
  return {decode_real(node[0], what), decode_real(node[1], what)};
}

VectorXcd decode_vector(const json& node, const char* what) {
  if (!node.is_array())
    throw ValidationError(std::string(what) + " is not an array");
  VectorXcd out(node.size());
  for (std::size_t i = 0; i < node.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = decode_complex(node[i], what);
  return out;
}

MatrixXcd decode_matrix(const json& node, const char* what) {
  if (!node.is_array())
    throw ValidationError(std::string(what) + " is not an array of rows");
  const std::size_t rows = node.size();
  std::size_t cols = rows == 0 ? 0 : node[0].size();
  MatrixXcd out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!node[i].is_array() || node[i].size() != cols)
      throw ValidationError(std::string(what) + " rows have unequal lengths");
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          decode_complex(node[i][j], what);
  }
  return out;
}

SectorKind decode_sector_kind(const std::string& name) {
  if (name == "full") return SectorKind::Full;
  if (name == "symmetric" || name == "sym") return SectorKind::Symmetric;
  if (name == "antisymmetric" || name == "anti")
    return SectorKind::Antisymmetric;
  throw ValidationError("unknown sector kind '" + name + "'");
}

Sector decode_sector(const json& doc) {
  const json& node = expect(doc, "sector", "the document");
  if (!node.is_object())
    throw ValidationError("the sector descriptor is not an object");
  const json& kind = expect(node, "kind", "the sector descriptor");
  if (!kind.is_string())
    throw ValidationError("the sector kind is not a string");
  const json& d = expect(node, "d", "the sector descriptor");
  const json& n = expect(node, "n", "the sector descriptor");
  if (!d.is_number_integer() || !n.is_number_integer())
    throw ValidationError("the sector sizes are not integers");
  return Sector(d.get<int>(), n.get<int>(),
                decode_sector_kind(kind.get<std::string>()));
}

IndexSubset decode_subset_key(const std::string& key) {
  std::vector<int> indices;
  std::istringstream stream(key);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("subset key '" + key + "' is not comma-joined integers");
    }
    if (used != item.size())
      throw ValidationError("subset key '" + key + "' is not comma-joined integers");
    indices.push_back(value);
  }
  try {
    return IndexSubset(std::move(indices));
  } catch (const Error& e) {
    throw ValidationError("subset key '" + key + "': " + e.what());
  }
}

std::pair<std::vector<IndexSubset>, std::vector<DensityMatrix>> decode_parts(
    const json& node, const Tolerances& tol) {
  if (!node.is_object())
    throw ValidationError("the parts table is not an object");
  std::vector<IndexSubset> subsets;
  std::vector<DensityMatrix> parts;
  for (auto it = node.begin(); it != node.end(); ++it) {
    subsets.push_back(decode_subset_key(it.key()));
    parts.emplace_back(decode_matrix(it.value(), "a marginal part"), tol);
  }
  return {std::move(subsets), std::move(parts)};
}

}  // namespace

// ---- state -------------------------------------------------------------

std::string serialize(const PureState& value) {
  return envelope("state",
                  json{{"amplitudes",
                        encode_vector(value.amplitudes, "the amplitudes")}},
                  encode_sector(value.sector));
}

PureState parse_state(const std::string& text, const Tolerances& tol) {
  json doc = open_envelope(text, "state");
  Sector sector = decode_sector(doc);
  VectorXcd amplitudes =
      decode_vector(expect(doc["payload"], "amplitudes", "the state payload"),
                    "the amplitudes");
  return PureState(sector, std::move(amplitudes), tol);
}

// ---- density -----------------------------------------------------------

std::string serialize(const DensityMatrix& value) {
  return envelope("density",
                  json{{"dim", value.dimension()},
                       {"entries",
                        encode_matrix(value.entries(), "the density entries")}});
}

DensityMatrix parse_density(const std::string& text, const Tolerances& tol) {
  json doc = open_envelope(text, "density");
  const json& payload = doc["payload"];
  MatrixXcd entries = decode_matrix(
      expect(payload, "entries", "the density payload"), "the density entries");
  const json& dim = expect(payload, "dim", "the density payload");
  if (!dim.is_number_integer() || dim.get<long>() != entries.rows())
    throw ValidationError("the declared dim does not match the entries");
  return DensityMatrix(std::move(entries), tol);
}

// ---- marginal_vector ----------------------------------------------------

std::string serialize(const MarginalVector& value) {
  return envelope("marginal_vector",
                  json{{"parts", encode_parts(value.subsets, value.parts)}},
                  encode_sector(value.sector));
}

MarginalVector parse_marginal_vector(const std::string& text,
                                     const Tolerances& tol) {
  json doc = open_envelope(text, "marginal_vector");
  Sector sector = decode_sector(doc);
  auto [subsets, parts] = decode_parts(
      expect(doc["payload"], "parts", "the marginal payload"), tol);
  return make_marginal_vector(sector, std::move(subsets), std::move(parts));
}

// ---- hamiltonian ---------------------------------------------------------

std::string serialize(const LocalHamiltonian& value) {
  json terms = json::object();
  for (const auto& [subset, term] : value.terms)
    terms[subset.key()] = encode_matrix(term, "a Hamiltonian term");
  return envelope("hamiltonian",
                  json{{"m", value.locality}, {"terms", std::move(terms)}},
                  encode_sector(value.sector));
}

LocalHamiltonian parse_hamiltonian(const std::string& text,
                                   const Tolerances& tol) {
  json doc = open_envelope(text, "hamiltonian");
  Sector sector = decode_sector(doc);
  const json& payload = doc["payload"];
  const json& m = expect(payload, "m", "the hamiltonian payload");
  if (!m.is_number_integer())
    throw ValidationError("the locality m is not an integer");
  const json& terms_node = expect(payload, "terms", "the hamiltonian payload");
  if (!terms_node.is_object())
    throw ValidationError("the terms table is not an object");
  std::map<IndexSubset, MatrixXcd> terms;
  for (auto it = terms_node.begin(); it != terms_node.end(); ++it)
    terms.emplace(decode_subset_key(it.key()),
                  decode_matrix(it.value(), "a Hamiltonian term"));
  return LocalHamiltonian(sector, m.get<int>(), std::move(terms), tol);
}

// ---- kernel --------------------------------------------------------------

std::string serialize(const KernelBasis& value) {
  json subsets = json::array();
  for (const IndexSubset& subset : value.subsets)
    subsets.push_back(subset.indices);
  json elements = json::array();
  for (const MatrixXcd& element : value.elements)
    elements.push_back(encode_matrix(element, "a kernel element"));
  return envelope("kernel",
                  json{{"elements", std::move(elements)},
                       {"subsets", std::move(subsets)}},
                  encode_sector(value.sector));
}

KernelBasis parse_kernel(const std::string& text, const Tolerances& tol) {
  json doc = open_envelope(text, "kernel");
  Sector sector = decode_sector(doc);
  const json& payload = doc["payload"];
  const json& subsets_node = expect(payload, "subsets", "the kernel payload");
  if (!subsets_node.is_array())
    throw ValidationError("the kernel subsets are not an array");
  std::vector<IndexSubset> subsets;
  for (const json& item : subsets_node) {
    if (!item.is_array())
      throw ValidationError("a kernel subset is not an integer array");
    std::vector<int> indices;
    for (const json& idx : item) {
      if (!idx.is_number_integer())
        throw ValidationError("a kernel subset holds a non-integer");
      indices.push_back(idx.get<int>());
    }
    subsets.emplace_back(std::move(indices));
  }
  const json& elements_node = expect(payload, "elements", "the kernel payload");
  if (!elements_node.is_array())
    throw ValidationError("the kernel elements are not an array");
  std::vector<MatrixXcd> elements;
  for (const json& item : elements_node) {
    MatrixXcd element = decode_matrix(item, "a kernel element");
    if (element.rows() != sector.dimension() ||
        element.cols() != sector.dimension())
      throw ValidationError("a kernel element does not act on the sector");
    double defect = hermiticity_defect(element);
    if (defect > tol.structural)
      throw ValidationError("a kernel element is not Hermitian (defect " +
                            std::to_string(defect) + ")");
    double trace = element.trace().real();
    if (std::abs(trace) > tol.structural * element.rows())
      throw ValidationError("a kernel element is not traceless (trace " +
                            std::to_string(trace) + ")");
    elements.push_back(std::move(element));
  }
  return KernelBasis{sector, std::move(subsets), std::move(elements)};
}

// ---- face ------------------------------------------------------------

std::string serialize(const PreimageFace& value) {
  return envelope(
      "face",
      json{{"common_rdm", value.common_rdm},
           {"representative",
            encode_matrix(value.representative.entries(), "the representative")},
           {"residual", value.residual},
           {"subspace", encode_matrix(value.subspace, "the face subspace")},
           {"target", encode_parts(value.target.subsets, value.target.parts)},
           {"transitions_vanish", value.transitions_vanish}},
      encode_sector(value.sector));
}

PreimageFace parse_face(const std::string& text, const Tolerances& tol) {
  json doc = open_envelope(text, "face");
  Sector sector = decode_sector(doc);
  const json& payload = doc["payload"];
  auto [subsets, parts] =
      decode_parts(expect(payload, "target", "the face payload"), tol);
  MarginalVector target =
      make_marginal_vector(sector, std::move(subsets), std::move(parts));
  MatrixXcd subspace = decode_matrix(
      expect(payload, "subspace", "the face payload"), "the face subspace");
  if (subspace.rows() != sector.dimension())
    throw ValidationError("the face subspace does not live on the sector");
  MatrixXcd gram = subspace.adjoint() * subspace;
  double ortho_defect =
      (gram - MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (ortho_defect > 1e-8)
    throw ValidationError(
        "the face subspace columns are not orthonormal (defect " +
        std::to_string(ortho_defect) + ")");
  DensityMatrix representative(
      decode_matrix(expect(payload, "representative", "the face payload"),
                    "the representative"),
      tol);
  const json& common = expect(payload, "common_rdm", "the face payload");
  const json& transitions =
      expect(payload, "transitions_vanish", "the face payload");
  if (!common.is_boolean() || !transitions.is_boolean())
    throw ValidationError("the face certificates are not booleans");
  double residual =
      decode_real(expect(payload, "residual", "the face payload"),
                  "the face residual");
  return PreimageFace{sector,
                      std::move(target),
                      std::move(subspace),
                      std::move(representative),
                      common.get<bool>(),
                      transitions.get<bool>(),
                      residual};
}

// ---- verdict ----------------------------------------------------------

std::string serialize(const ExtremalityVerdict& value) {
  json payload{{"preimage_dimension", value.preimage_dimension},
               {"verdict", to_string(value.verdict)}};
  std::optional<json> sector;
  if (value.witness) {
    payload["witness"] =
        json{{"direction",
              encode_matrix(value.witness->direction, "the witness direction")},
             {"minus", encode_parts(value.witness->minus.subsets,
                                    value.witness->minus.parts)},
             {"plus", encode_parts(value.witness->plus.subsets,
                                   value.witness->plus.parts)}};
    sector = encode_sector(value.witness->plus.sector);
  } else {
    payload["witness"] = nullptr;
  }
  return envelope("verdict", std::move(payload), std::move(sector));
}

ExtremalityVerdict parse_extremality(const std::string& text,
                                     const Tolerances& tol) {
  json doc = open_envelope(text, "verdict");
  const json& payload = doc["payload"];
  const json& tag = expect(payload, "verdict", "the verdict payload");
  if (!tag.is_string())
    throw ValidationError("the verdict tag is not a string");
  ExtremalityVerdict result;
  const std::string name = tag.get<std::string>();
  if (name == "extreme")
    result.verdict = Extremality::Extreme;
  else if (name == "not_extreme")
    result.verdict = Extremality::NotExtreme;
  else if (name == "undecided")
    result.verdict = Extremality::Undecided;
  else
    throw ValidationError("unknown extremality verdict '" + name + "'");
  const json& dim = expect(payload, "preimage_dimension", "the verdict payload");
  if (!dim.is_number_integer() || dim.get<int>() < 0)
    throw ValidationError("the preimage dimension is not a nonnegative integer");
  result.preimage_dimension = dim.get<int>();
  const json& witness = expect(payload, "witness", "the verdict payload");
  if (!witness.is_null()) {
    Sector sector = decode_sector(doc);
    auto [plus_subsets, plus_parts] =
        decode_parts(expect(witness, "plus", "the witness"), tol);
    auto [minus_subsets, minus_parts] =
        decode_parts(expect(witness, "minus", "the witness"), tol);
    MatrixXcd direction = decode_matrix(
        expect(witness, "direction", "the witness"), "the witness direction");
    double defect = hermiticity_defect(direction);
    if (defect > tol.structural)
      throw ValidationError("the witness direction is not Hermitian (defect " +
                            std::to_string(defect) + ")");
    result.witness = ExtremalityWitness{
        make_marginal_vector(sector, std::move(plus_subsets),
                             std::move(plus_parts)),
        make_marginal_vector(sector, std::move(minus_subsets),
                             std::move(minus_parts)),
        std::move(direction)};
  }
  return result;
}

std::string serialize(const ReconstructionResult& value, const Sector& sector) {
  json payload{{"phase_solution",
                encode_vector(value.phase_solution, "the phase solution")},
               {"residual", value.residual},
               {"status", to_string(value.status)},
               {"system_cols", value.system_cols},
               {"system_rows", value.system_rows},
               {"verdict", to_string(value.status)}};
  payload["state"] = value.state ? encode_vector(value.state->amplitudes,
                                                 "the recovered state")
                                 : json(nullptr);
  return envelope("verdict", std::move(payload), encode_sector(sector));
}

ReconstructionResult parse_reconstruction(const std::string& text,
                                          const Tolerances& tol) {
  json doc = open_envelope(text, "verdict");
  const json& payload = doc["payload"];
  const json& tag = expect(payload, "status", "the recovery verdict payload");
  if (!tag.is_string())
    throw ValidationError("the recovery status is not a string");
  ReconstructionResult result;
  const std::string name = tag.get<std::string>();
  if (name == "unique")
    result.status = ReconstructionStatus::Unique;
  else if (name == "ambiguous")
    result.status = ReconstructionStatus::Ambiguous;
  else if (name == "inconsistent")
    result.status = ReconstructionStatus::Inconsistent;
  else if (name == "degenerate")
    result.status = ReconstructionStatus::Degenerate;
  else
    throw ValidationError("unknown recovery status '" + name + "'");
  result.phase_solution = decode_vector(
      expect(payload, "phase_solution", "the recovery verdict payload"),
      "the phase solution");
  result.residual =
      decode_real(expect(payload, "residual", "the recovery verdict payload"),
                  "the recovery residual");
  const json& rows =
      expect(payload, "system_rows", "the recovery verdict payload");
  const json& cols =
      expect(payload, "system_cols", "the recovery verdict payload");
  if (!rows.is_number_integer() || !cols.is_number_integer())
    throw ValidationError("the system size entries are not integers");
  result.system_rows = rows.get<Eigen::Index>();
  result.system_cols = cols.get<Eigen::Index>();
  const json& state =
      expect(payload, "state", "the recovery verdict payload");
  if (!state.is_null()) {
    Sector sector = decode_sector(doc);
    result.state.emplace(sector,
                         decode_vector(state, "the recovered state"), tol);
  }
  return result;
}

// ---- decomposition ------------------------------------------------------

std::string serialize(const BlockDecomposition& value) {
  return envelope(
      "decomposition",
      json{{"basis", encode_matrix(value.basis, "the adapted basis")},
           {"dims", value.dims},
           {"x33", encode_matrix(value.x33, "the X33 block")},
           {"y13", encode_matrix(value.y13, "the Y13 block")},
           {"y22", encode_matrix(value.y22, "the Y22 block")},
           {"y23", encode_matrix(value.y23, "the Y23 block")},
           {"y33", encode_matrix(value.y33, "the Y33 block")}});
}

BlockDecomposition parse_decomposition(const std::string& text,
                                       const Tolerances& tol) {
  json doc = open_envelope(text, "decomposition");
  const json& payload = doc["payload"];
  const json& dims_node = expect(payload, "dims", "the decomposition payload");
  if (!dims_node.is_array() || dims_node.size() != 3)
    throw ValidationError("dims is not a three-element array");
  BlockDecomposition result;
  for (int i = 0; i < 3; ++i) {
    if (!dims_node[i].is_number_integer() || dims_node[i].get<int>() < 0)
      throw ValidationError("dims holds a negative or non-integer entry");
    result.dims[static_cast<std::size_t>(i)] = dims_node[i].get<int>();
  }
  result.basis = decode_matrix(
      expect(payload, "basis", "the decomposition payload"), "the adapted basis");
  const long total = result.dims[0] + result.dims[1] + result.dims[2];
  if (result.basis.rows() != total || result.basis.cols() != total)
    throw ValidationError("the adapted basis does not match dims");
  double unitary_defect =
      (result.basis.adjoint() * result.basis -
       MatrixXcd::Identity(total, total))
          .cwiseAbs()
          .maxCoeff();
  if (unitary_defect > 1e-8)
    throw ValidationError("the adapted basis is not unitary (defect " +
                          std::to_string(unitary_defect) + ")");
  auto block = [&](const char* key, long rows, long cols, bool hermitian) {
    MatrixXcd m = decode_matrix(expect(payload, key, "the decomposition payload"),
                                key);
    if (m.rows() != rows || m.cols() != cols)
      throw ValidationError(std::string("the ") + key +
                            " block does not match dims");
    if (hermitian && hermiticity_defect(m) > tol.structural)
      throw ValidationError(std::string("the ") + key +
                            " block is not Hermitian");
    return m;
  };
  result.x33 = block("x33", result.dims[2], result.dims[2], true);
  result.y13 = block("y13", result.dims[0], result.dims[2], false);
  result.y22 = block("y22", result.dims[1], result.dims[1], true);
  result.y23 = block("y23", result.dims[1], result.dims[2], false);
  result.y33 = block("y33", result.dims[2], result.dims[2], true);
  return result;
}

// ---- envelope inspection ---------------------------------------------

std::string document_kind(const std::string& text) {
  json doc = parse_text(text);
  if (!doc.is_object()) throw ValidationError("the document is not an object");
  const json& version = expect(doc, "schema_version", "the document");
  if (!version.is_string() || version.get<std::string>() != "1")
    throw ValidationError("unsupported schema_version (expected \"1\")");
  const json& kind = expect(doc, "kind", "the document");
  if (!kind.is_string())
    throw ValidationError("the document kind is not a string");
  expect(doc, "payload", "the document");
  static const char* known[] = {"state",  "density", "marginal_vector",
                                "hamiltonian", "kernel",  "face",
                                "verdict", "decomposition"};
  for (const char* name : known)
    if (kind.get<std::string>() == name) return name;
  throw ValidationError("unknown document kind '" + kind.get<std::string>() +
                        "'");
}

IndexSubset parse_subset_flag(const std::string& flag) {
  return decode_subset_key(flag);
}

Sector parse_sector_flag(const std::string& flag) {
  std::vector<std::string> fields;
  std::istringstream stream(flag);
  std::string item;
  while (std::getline(stream, item, ':')) fields.push_back(item);
  if (fields.size() != 3)
    throw ValidationError("sector flag '" + flag +
                          "' is not of the form kind:d:N");
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size())
      throw ValidationError("sector flag '" + flag +
                            "' holds a non-integer size");
    return value;
  };
  return Sector(to_int(fields[1]), to_int(fields[2]),
                decode_sector_kind(fields[0]));
}

}  // namespace qmarg

// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0

#include "qmarg/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"

namespace qmarg {

namespace {

constexpr long kAmbientLimit = 4096;

long checked_power(int d, int N) {
  long p = 1;
  for (int i = 0; i < N; ++i) {
    p *= d;
    if (p > kAmbientLimit)
      throw GuardError("ambient dimension d^N exceeds the dense limit 4096 (d=" +
                       std::to_string(d) + ", N=" + std::to_string(N) + ")");
  }
  return p;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void validate_params(int d, int N, SectorKind kind) {
  if (d < 1 || N < 1)
    throw ValidationError("sector parameters must satisfy d >= 1, N >= 1");
  if (kind == SectorKind::Antisymmetric && N > d)
    throw ValidationError(
        "antisymmetric sector with N > d has dimension zero (d=" +
        std::to_string(d) + ", N=" + std::to_string(N) + ")");
  checked_power(d, N);
}

int dimension_of(int d, int N, SectorKind kind) {
  switch (kind) {
    case SectorKind::Full:
      return static_cast<int>(checked_power(d, N));
    case SectorKind::Symmetric:
      return static_cast<int>(binomial(d + N - 1, N));
    case SectorKind::Antisymmetric:
      return static_cast<int>(binomial(d, N));
  }
  throw ValidationError("unknown sector kind");
}

// Rank of a word in the big-endian base-d order (levels are 1-based).
long word_rank(const BasisLabel& word, int d) {
  long r = 0;
  for (int v : word) r = r * d + (v - 1);
  return r;
}

// Parity (+1/-1) of the permutation that sorts `word`, assuming distinct
// entries: (-1)^(number of inversions).
int inversion_sign(const BasisLabel& word) {
  int inv = 0;
  for (size_t i = 0; i < word.size(); ++i)
    for (size_t j = i + 1; j < word.size(); ++j)
      if (word[i] > word[j]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace

std::string to_string(SectorKind kind) {
  switch (kind) {
    case SectorKind::Full:
      return "full";
    case SectorKind::Symmetric:
      return "symmetric";
    case SectorKind::Antisymmetric:
      return "antisymmetric";
  }
  return "unknown";
}

Sector::Sector(int d, int N, SectorKind kind) : d_(d), N_(N), kind_(kind) {
  validate_params(d, N, kind);
  ambient_ = checked_power(d, N);
  dimension_ = dimension_of(d, N, kind);
}

int sector_dimension(int d, int N, SectorKind kind) {
  validate_params(d, N, kind);
  return dimension_of(d, N, kind);
}

std::vector<BasisLabel> basis_labels(const Sector& sector) {
  const int d = sector.d();
  const int N = sector.N();
  std::vector<BasisLabel> labels;
  labels.reserve(sector.dimension());
  BasisLabel word(N, 1);

  if (sector.kind() == SectorKind::Full) {
    // Odometer over all words, lexicographic.
    while (true) {
      labels.push_back(word);
      int pos = N - 1;
      while (pos >= 0 && word[pos] == d) word[pos--] = 1;
      if (pos < 0) break;
      ++word[pos];
    }
    return labels;
  }

  const bool strict = sector.kind() == SectorKind::Antisymmetric;
  // Monotone words: advance the rightmost incrementable digit, then reset
  // the tail to the smallest admissible run.
  if (strict)
    for (int i = 0; i < N; ++i) word[i] = i + 1;
  while (true) {
    labels.push_back(word);
    int pos = N - 1;
    const auto limit = [&](int i) { return strict ? d - (N - 1 - i) : d; };
    while (pos >= 0 && word[pos] == limit(pos)) --pos;
    if (pos < 0) break;
    ++word[pos];
    for (int i = pos + 1; i < N; ++i) word[i] = strict ? word[i - 1] + 1 : word[pos];
  }
  return labels;
}

int label_index(const Sector& sector, const BasisLabel& label) {
  const auto labels = basis_labels(sector);
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label)
    throw ValidationError("label is not a basis label of the sector");
  return static_cast<int>(it - labels.begin());
}

PureState::PureState(Sector sector_in, Eigen::VectorXcd amplitudes_in,
                     const Tolerances& tol)
    : sector(std::move(sector_in)), amplitudes(std::move(amplitudes_in)) {
  if (amplitudes.size() != sector.dimension())
    throw ValidationError("state has " + std::to_string(amplitudes.size()) +
                          " amplitudes, sector dimension is " +
                          std::to_string(sector.dimension()));
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > tol.structural)
    throw ValidationError("state norm deviates from 1 by " +
                          std::to_string(std::abs(norm - 1.0)));
}

Eigen::MatrixXcd embedding_isometry(const Sector& sector) {
  const long dn = sector.ambient_dimension();
  const int dim = sector.dimension();
  Eigen::MatrixXcd iso = Eigen::MatrixXcd::Zero(dn, dim);

  if (sector.kind() == SectorKind::Full) {
    iso.setIdentity();
    return iso;
  }

  const auto labels = basis_labels(sector);
  for (int c = 0; c < dim; ++c) {
    BasisLabel word = labels[c];  // sorted already
    if (sector.kind() == SectorKind::Antisymmetric) {
      const double scale = 1.0 / std::sqrt(std::tgamma(word.size() + 1.0));
      do {
        iso(word_rank(word, sector.d()), c) += inversion_sign(word) * scale;
      } while (std::next_permutation(word.begin(), word.end()));
    } else {
      // Count distinct rearrangements first for the normalization.
      long count = 0;
      BasisLabel w = word;
      do {
        ++count;
      } while (std::next_permutation(w.begin(), w.end()));
      const double scale = 1.0 / std::sqrt(static_cast<double>(count));
      do {
        iso(word_rank(word, sector.d()), c) += scale;
      } while (std::next_permutation(word.begin(), word.end()));
    }
  }
  return iso;
}

PureState slater_state(const Sector& sector, const std::vector<int>& orbitals) {
  if (sector.kind() != SectorKind::Antisymmetric)
    throw PreconditionError("slater_state requires an antisymmetric sector");
  BasisLabel label = orbitals;
  std::sort(label.begin(), label.end());
  if (std::adjacent_find(label.begin(), label.end()) != label.end())
    throw ValidationError("occupied levels must be distinct");
  const int idx = label_index(sector, label);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(sector.dimension());
  amps(idx) = 1.0;
  return PureState(sector, std::move(amps));
}

std::pair<PureState, PureState> ghz_pair(int N) {
  if (N < 2) throw PreconditionError("ghz_pair requires N >= 2");
  const Sector sector(2, N, SectorKind::Symmetric);
  const int dim = sector.dimension();
  Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd minus = Eigen::VectorXcd::Zero(dim);
  const double s = 1.0 / std::sqrt(2.0);
  plus(0) = s;
  plus(dim - 1) = s;
  minus(0) = s;
  minus(dim - 1) = -s;
  return {PureState(sector, std::move(plus)), PureState(sector, std::move(minus))};
}

ParticleHoleMap particle_hole_map(const Sector& sector) {
  if (sector.kind() != SectorKind::Antisymmetric)
    throw PreconditionError("particle_hole_map requires an antisymmetric sector");
  const int d = sector.d();
  const int N = sector.N();
  if (N == d)
    throw PreconditionError("particle_hole_map requires N < d");
  const Sector target(d, d - N, SectorKind::Antisymmetric);

  const auto src_labels = basis_labels(sector);
  Eigen::MatrixXcd map = Eigen::MatrixXcd::Zero(target.dimension(), sector.dimension());
  for (int c = 0; c < sector.dimension(); ++c) {
    const BasisLabel& occ = src_labels[c];
    BasisLabel comp;
    comp.reserve(d - N);
    std::vector<bool> used(d + 1, false);
    for (int v : occ) used[v] = true;
    for (int v = 1; v <= d; ++v)
      if (!used[v]) comp.push_back(v);
    // Parity of sorting the concatenation (occ, comp) into (1..d); both
    // halves are sorted, so only cross inversions contribute.
    int inv = 0;
    for (int a : occ)
      for (int b : comp)
        if (a > b) ++inv;
    map(label_index(target, comp), c) = (inv % 2 == 0) ? 1.0 : -1.0;
  }
  return ParticleHoleMap{sector, target, std::move(map)};
}

PureState ParticleHoleMap::apply(const PureState& state) const {
  if (state.sector != source)
    throw ValidationError("state does not live on the map's source sector");
  Eigen::VectorXcd image = matrix * state.amplitudes.conjugate();
  return PureState(target, std::move(image));
}

std::pair<PureState, PureState> five_qubit_code() {
  const Sector sector(2, 5, SectorKind::Full);
  Eigen::Matrix2cd X, Z, I2;
  X << 0, 1, 1, 0;
  Z << 1, 0, 0, -1;
  I2.setIdentity();

  const char pattern[] = {'X', 'Z', 'Z', 'X', 'I'};
  std::vector<Eigen::MatrixXcd> gens;
  for (int shift = 0; shift < 4; ++shift) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Ones(1, 1);
    for (int q = 0; q < 5; ++q) {
      const char p = pattern[((q - shift) % 5 + 5) % 5];
      g = kron(g, p == 'X' ? Eigen::MatrixXcd(X)
                           : (p == 'Z' ? Eigen::MatrixXcd(Z) : Eigen::MatrixXcd(I2)));
    }
    gens.push_back(std::move(g));
  }

  // Average over the 16-element group generated by the four shifts.
  const int dim = 32;
  Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(dim, dim);
  for (int mask = 0; mask < 16; ++mask) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 0; k < 4; ++k)
      if (mask & (1 << k)) g = g * gens[k];
    projector += g;
  }
  projector /= 16.0;

  Eigen::VectorXcd zero_l = projector.col(0);   // image of |00000>
  Eigen::VectorXcd one_l = projector.col(31);   // image of |11111>
  zero_l.normalize();
  one_l.normalize();
  return {PureState(sector, std::move(zero_l)), PureState(sector, std::move(one_l))};
}

}  // namespace qmarg

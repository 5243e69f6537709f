// Copyright 2026 The MDM Tradeoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdm/sym_basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace mdm {

OccupationVector::OccupationVector(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw std::invalid_argument("OccupationVector: need at least one letter");
  }
  for (int c : counts_) {
    if (c < 0) throw std::invalid_argument("OccupationVector: negative occupation");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), 0);
}

OccupationVector OccupationVector::shifted(int letter, int delta) const {
  std::vector<int> counts = counts_;
  counts.at(static_cast<std::size_t>(letter)) += delta;
  return OccupationVector(std::move(counts));
}

std::uint64_t dimension(int copies, int local_dim) {
  if (local_dim < 2) throw std::invalid_argument("dimension: local dimension must be >= 2");
  if (copies < 0) throw std::invalid_argument("dimension: number of copies must be >= 0");
  // C(n, k) built up as C(n-k+i, i); every intermediate value is itself a
  // binomial coefficient, so the division is exact.
  const std::uint64_t k = static_cast<std::uint64_t>(local_dim - 1);
  const std::uint64_t n = static_cast<std::uint64_t>(copies) + k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw std::overflow_error("dimension: binomial coefficient overflows 64 bits");
    }
    result = result * factor / i;
  }
  return result;
}

namespace {

void enumerate(int remaining, int letter, std::vector<int>& prefix, std::vector<OccupationVector>& out) {
  const int d = static_cast<int>(prefix.size());
  if (letter == d - 1) {
    prefix[static_cast<std::size_t>(letter)] = remaining;
    out.emplace_back(prefix);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    prefix[static_cast<std::size_t>(letter)] = c;
    enumerate(remaining - c, letter + 1, prefix, out);
  }
}

}  // namespace

SymBasis::SymBasis(int copies, int local_dim) : copies_(copies), local_dim_(local_dim) {
  const std::uint64_t expected = dimension(copies, local_dim);
  std::vector<int> prefix(static_cast<std::size_t>(local_dim), 0);
  states_.reserve(expected);
  enumerate(copies, 0, prefix, states_);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    index_.emplace(states_[i], static_cast<Eigen::Index>(i));
  }
}

Eigen::Index SymBasis::index_of(const OccupationVector& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) throw std::out_of_range("SymBasis: occupation vector not in basis");
  return it->second;
}

std::optional<Eigen::Index> SymBasis::find(const OccupationVector& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::Index SymBasis::single_excitation(int letter) const {
  if (copies_ < 1 || letter < 1 || letter >= local_dim_) {
    throw std::out_of_range("SymBasis: single excitation needs N >= 1 and 1 <= letter < d");
  }
  std::vector<int> counts(static_cast<std::size_t>(local_dim_), 0);
  counts[0] = copies_ - 1;
  counts[static_cast<std::size_t>(letter)] = 1;
  return index_of(OccupationVector(std::move(counts)));
}

SymBasis build_basis(int copies, int local_dim) { return SymBasis(copies, local_dim); }

std::uint64_t full_space_dimension(int copies, int local_dim) {
  if (local_dim < 2 || copies < 0) throw std::invalid_argument("full_space_dimension: bad (N, d)");
  std::uint64_t size = 1;
  for (int i = 0; i < copies; ++i) {
    size *= static_cast<std::uint64_t>(local_dim);
    if (size > kMaxEmbedDimension) {
      throw std::length_error("embedding of " + std::to_string(copies) + " qudits of dimension " +
                              std::to_string(local_dim) + " exceeds the oracle size guard");
    }
  }
  return size;
}

Eigen::VectorXd embed_full(const OccupationVector& occ) {
  const int d = occ.dimension();
  const int n = occ.total();
  const auto size = static_cast<Eigen::Index>(full_space_dimension(n, d));

  std::vector<int> letters;
  letters.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) letters.insert(letters.end(), static_cast<std::size_t>(occ[j]), j);

  // sqrt(prod N_i! / N!) = 1 / sqrt(number of distinct orderings)
  double log_orderings = std::lgamma(n + 1.0);
  for (int j = 0; j < d; ++j) log_orderings -= std::lgamma(occ[j] + 1.0);
  const double amplitude = std::exp(-0.5 * log_orderings);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
  do {
    Eigen::Index flat = 0;
    for (int letter : letters) flat = flat * d + letter;
    out(flat) = amplitude;
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

Eigen::MatrixXd embedding_isometry(const SymBasis& basis) {
  const auto rows = static_cast<Eigen::Index>(full_space_dimension(basis.copies(), basis.local_dim()));
  Eigen::MatrixXd iso(rows, basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) iso.col(i) = embed_full(basis.state(i));
  return iso;
}

}  // namespace mdm

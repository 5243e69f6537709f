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

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mdm {

/// Occupation numbers (N_0, ..., N_{d-1}) labelling one symmetric basis state
/// |{N_i}; N> of N qudits.
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> counts);

  int total() const { return total_; }
  int dimension() const { return static_cast<int>(counts_.size()); }
  int operator[](int letter) const { return counts_[static_cast<std::size_t>(letter)]; }
  const std::vector<int>& counts() const { return counts_; }

  /// Copy with one more (delta=+1) or one fewer (delta=-1) qudit in `letter`.
  OccupationVector shifted(int letter, int delta) const;

  auto operator<=>(const OccupationVector& other) const { return counts_ <=> other.counts_; }
  bool operator==(const OccupationVector& other) const { return counts_ == other.counts_; }

 private:
  std::vector<int> counts_;
  int total_ = 0;
};

/// D(N, d) = binomial(N + d - 1, d - 1), the dimension of the symmetric
/// subspace of N qudits.
std::uint64_t dimension(int copies, int local_dim);

/// Occupation-number basis of the symmetric subspace. States are sorted
/// lexicographically descending, so |0>^{(x)N} = (N, 0, ..., 0) is index 0.
class SymBasis {
 public:
  SymBasis(int copies, int local_dim);

  int copies() const { return copies_; }
  int local_dim() const { return local_dim_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }

  const std::vector<OccupationVector>& states() const { return states_; }
  const OccupationVector& state(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }

  /// Throws std::out_of_range if `occ` is not a state of this basis.
  Eigen::Index index_of(const OccupationVector& occ) const;
  std::optional<Eigen::Index> find(const OccupationVector& occ) const;

  /// The state with N-1 qudits in |0> and one in |letter>, letter >= 1.
  Eigen::Index single_excitation(int letter) const;

 private:
  int copies_;
  int local_dim_;
  std::vector<OccupationVector> states_;
  std::map<OccupationVector, Eigen::Index> index_;
};

SymBasis build_basis(int copies, int local_dim);

template <typename Scalar = double>
struct BranchTerm {
  OccupationVector child;
  int letter;
  Scalar coefficient;
};

/// Splits a symmetric state of N+1 qudits into (N-qudit symmetric state) (x)
/// (last qudit):
///   |S; N+1> = sum_j sqrt(S_j / (N+1)) |S - e_j; N> |j>.
/// Terms come out in ascending letter order, one per occupied letter.
template <typename Scalar = double>
std::vector<BranchTerm<Scalar>> branch(const OccupationVector& parent) {
  if (parent.total() < 1) {
    throw std::invalid_argument("branch: occupation total must be at least 1");
  }
  using std::sqrt;
  std::vector<BranchTerm<Scalar>> terms;
  const Scalar total = static_cast<Scalar>(parent.total());
  for (int j = 0; j < parent.dimension(); ++j) {
    if (parent[j] == 0) continue;
    terms.push_back({parent.shifted(j, -1), j, sqrt(static_cast<Scalar>(parent[j]) / total)});
  }
  return terms;
}

/// Upper bound on d^N for the explicit tensor-product embedding.
inline constexpr std::uint64_t kMaxEmbedDimension = 1'000'000;

/// Amplitudes of |{N_i}; N> over the computational basis of (C^d)^{(x)N}. The
/// first qudit is the most significant digit of the flat index.
Eigen::VectorXd embed_full(const OccupationVector& occ);

/// Columns are embed_full of every basis state; a (d^N x D) isometry.
Eigen::MatrixXd embedding_isometry(const SymBasis& basis);

/// d^N with the embed size guard applied.
std::uint64_t full_space_dimension(int copies, int local_dim);

}  // namespace mdm

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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracle/full_tensor.hpp"

namespace mdm {
namespace {

std::vector<std::vector<int>> counts_of(const SymBasis& basis) {
  std::vector<std::vector<int>> out;
  for (const auto& s : basis.states()) out.push_back(s.counts());
  return out;
}

TEST(Dimension, SmallCases) {
  EXPECT_EQ(dimension(2, 2), 3u);
  for (int d = 2; d <= 8; ++d) EXPECT_EQ(dimension(1, d), static_cast<std::uint64_t>(d));
  EXPECT_EQ(oracle::occupations_by_enumeration(2, 3).size(), 6u);
  EXPECT_EQ(dimension(2, 3), 6u);
  EXPECT_EQ(dimension(0, 5), 1u);
}

TEST(Dimension, ExactAtTheTopOfTheRange) {
  // C(19, 7)
  EXPECT_EQ(dimension(12, 8), 50388u);
}

TEST(Dimension, RejectsBadArguments) {
  EXPECT_THROW(dimension(2, 1), std::invalid_argument);
  EXPECT_THROW(dimension(-1, 2), std::invalid_argument);
}

TEST(Dimension, MatchesBasisSizeAndEnumeration) {
  for (int n = 0; n <= 10; ++n)
    for (int d = 2; d <= 6; ++d) {
      EXPECT_EQ(static_cast<std::uint64_t>(build_basis(n, d).size()), dimension(n, d)) << n << ' ' << d;
    }
  for (int n = 0; n <= 5; ++n)
    for (int d = 2; d <= 4; ++d) EXPECT_EQ(oracle::occupations_by_enumeration(n, d).size(), dimension(n, d));
}

TEST(SymBasis, QubitOrdering) {
  EXPECT_EQ(counts_of(build_basis(1, 2)), (std::vector<std::vector<int>>{{1, 0}, {0, 1}}));
  EXPECT_EQ(counts_of(build_basis(2, 2)), (std::vector<std::vector<int>>{{2, 0}, {1, 1}, {0, 2}}));
}

TEST(SymBasis, QutritOrderingAndIndex) {
  const auto basis = build_basis(2, 3);
  const auto states = counts_of(basis);
  ASSERT_EQ(states.size(), 6u);
  EXPECT_EQ(states.front(), (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(states.back(), (std::vector<int>{0, 0, 2}));
  EXPECT_TRUE(std::is_sorted(states.rbegin(), states.rend()));
  for (Eigen::Index i = 0; i < basis.size(); ++i) EXPECT_EQ(basis.index_of(basis.state(i)), i);
  EXPECT_FALSE(basis.find(OccupationVector({1, 1, 1})).has_value());
  EXPECT_THROW(basis.index_of(OccupationVector({3, 0, 0})), std::out_of_range);
  EXPECT_EQ(basis.state(basis.single_excitation(2)).counts(), (std::vector<int>{1, 0, 1}));
}

TEST(OccupationVector, RejectsNegativeCounts) {
  EXPECT_THROW(OccupationVector({1, -1}), std::invalid_argument);
  EXPECT_EQ(OccupationVector({2, 0, 3}).total(), 5);
}

TEST(Branch, QubitFormulaNEqualsOne) {
  const auto terms = branch(OccupationVector({1, 1}));
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].child.counts(), (std::vector<int>{0, 1}));
  EXPECT_EQ(terms[0].letter, 0);
  EXPECT_NEAR(terms[0].coefficient, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(terms[1].child.counts(), (std::vector<int>{1, 0}));
  EXPECT_EQ(terms[1].letter, 1);
  EXPECT_NEAR(terms[1].coefficient, std::sqrt(0.5), 1e-15);
}

TEST(Branch, QubitFormulaNEqualsTwo) {
  // |3,2> = sqrt(1/3)|2,2>|0> + sqrt(2/3)|2,1>|1>
  const auto terms = branch(OccupationVector({1, 2}));
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].child.counts(), (std::vector<int>{0, 2}));
  EXPECT_NEAR(terms[0].coefficient, std::sqrt(1.0 / 3), 1e-15);
  EXPECT_EQ(terms[1].child.counts(), (std::vector<int>{1, 1}));
  EXPECT_NEAR(terms[1].coefficient, std::sqrt(2.0 / 3), 1e-15);
}

TEST(Branch, AllInReferenceLetter) {
  const auto terms = branch(OccupationVector({4, 0, 0}));
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0].child.counts(), (std::vector<int>{3, 0, 0}));
  EXPECT_EQ(terms[0].letter, 0);
  EXPECT_EQ(terms[0].coefficient, 1.0);
}

TEST(Branch, RejectsEmptyState) { EXPECT_THROW(branch(OccupationVector({0, 0})), std::invalid_argument); }

TEST(Branch, SquaredCoefficientsSumToOneExactly) {
  // sum_j (S_j / T) is an integer identity; check it on the numerators.
  for (int total = 1; total <= 8; ++total)
    for (int d = 2; d <= 4; ++d) {
      const auto basis = build_basis(total, d);
      for (const auto& s : basis.states()) {
        int numerator = 0;
        for (const auto& t : branch(s)) numerator += s[t.letter];
        EXPECT_EQ(numerator, total);
        double sum = 0;
        for (const auto& t : branch(s)) sum += t.coefficient * t.coefficient;
        EXPECT_NEAR(sum, 1.0, 1e-15);
      }
    }
}

TEST(Branch, ConsistentWithFullTensorEmbedding) {
  for (int total = 1; total <= 5; ++total)
    for (int d = 2; d <= 4; ++d) {
      const auto basis = build_basis(total, d);
      for (const auto& s : basis.states()) {
        Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(oracle::ipow(d, total));
        for (const auto& t : branch(s)) {
          const Eigen::VectorXd child = embed_full(t.child);
          for (Eigen::Index i = 0; i < child.size(); ++i) rebuilt(i * d + t.letter) += t.coefficient * child(i);
        }
        EXPECT_LT((rebuilt - embed_full(s)).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
}

TEST(EmbedFull, Examples) {
  const Eigen::VectorXd a = embed_full(OccupationVector({2, 0}));
  EXPECT_EQ(a, (Eigen::VectorXd(4) << 1, 0, 0, 0).finished());

  const Eigen::VectorXd b = embed_full(OccupationVector({1, 1}));
  EXPECT_NEAR(b(1), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(b(2), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(b(0), 0.0);
  EXPECT_EQ(b(3), 0.0);

  const Eigen::VectorXd c = embed_full(OccupationVector({1, 1, 1}));
  int nonzero = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) != 0.0) {
      ++nonzero;
      EXPECT_NEAR(c(i), 1 / std::sqrt(6.0), 1e-15);
    }
  }
  EXPECT_EQ(nonzero, 6);
}

TEST(EmbedFull, MatchesExplicitSymmetrizer) {
  for (int n = 1; n <= 4; ++n)
    for (int d = 2; d <= 3; ++d) {
      const auto basis = build_basis(n, d);
      const Eigen::MatrixXd expected = oracle::isometry(counts_of(basis), n, d);
      EXPECT_LT((embedding_isometry(basis) - expected).cwiseAbs().maxCoeff(), 1e-12) << n << ' ' << d;
    }
}

TEST(EmbedFull, Orthonormal) {
  for (int n = 1; n <= 5; ++n)
    for (int d = 2; d <= 4; ++d) {
      const Eigen::MatrixXd v = embedding_isometry(build_basis(n, d));
      const Eigen::MatrixXd gram = v.transpose() * v;
      EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(EmbedFull, SizeGuard) {
  EXPECT_THROW(embed_full(OccupationVector({20, 0, 0})), std::length_error);
}

}  // namespace
}  // namespace mdm

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

#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "mdm/sym_basis.hpp"
#include "mdm/types.hpp"

namespace mdm {

/// Real symmetric operator on H_{+,N} (x) H_d, flat index sym * d + letter.
template <typename Scalar = double>
struct SymOperator {
  int copies = 0;
  int local_dim = 0;
  Matrix<Scalar> matrix;

  Eigen::Index dim() const { return matrix.rows(); }
  Scalar trace() const { return matrix.trace(); }
  Scalar operator()(Eigen::Index sym_row, int letter_row, Eigen::Index sym_col, int letter_col) const {
    return matrix(product_index(sym_row, letter_row, local_dim), product_index(sym_col, letter_col, local_dim));
  }
};

/// Largest D(N, d) * d the dense builders accept.
inline constexpr std::uint64_t kMaxOperatorDimension = 2000;

namespace detail {

inline void check_operator_size(int copies, int local_dim) {
  if (copies < 1) throw std::invalid_argument("operators: need at least one input copy");
  if (dimension(copies, local_dim) * static_cast<std::uint64_t>(local_dim) > kMaxOperatorDimension) {
    throw std::length_error("operators: D(N,d)*d exceeds the dense size guard");
  }
}

}  // namespace detail

/// Projector onto H_{+,N+1}, written on H_{+,N} (x) H_d through the branching
/// rule: <(m,a)|Pi|(n,b)> = c(S,a) c(S,b) for the unique S = m + e_a = n + e_b.
template <typename Scalar = double>
SymOperator<Scalar> build_projector(int copies, int local_dim) {
  detail::check_operator_size(copies, local_dim);
  const SymBasis inputs(copies, local_dim);
  const SymBasis parents(copies + 1, local_dim);
  const Eigen::Index dim = inputs.size() * local_dim;

  SymOperator<Scalar> pi{copies, local_dim, Matrix<Scalar>::Zero(dim, dim)};
  for (const auto& parent : parents.states()) {
    const auto terms = branch<Scalar>(parent);
    for (const auto& row : terms) {
      const Eigen::Index r = product_index(inputs.index_of(row.child), row.letter, local_dim);
      for (const auto& col : terms) {
        const Eigen::Index c = product_index(inputs.index_of(col.child), col.letter, local_dim);
        pi.matrix(r, c) += row.coefficient * col.coefficient;
      }
    }
  }
  return pi;
}

/// Transposition over the N input qudits. The occupation states have real
/// amplitudes, so on the symmetric factor this is plain index transposition:
/// result((m,a),(n,b)) = X((n,a),(m,b)).
template <typename Scalar>
SymOperator<Scalar> partial_transpose_input(const SymOperator<Scalar>& op) {
  const int d = op.local_dim;
  const Eigen::Index sym_dim = op.dim() / d;
  SymOperator<Scalar> out{op.copies, d, Matrix<Scalar>(op.dim(), op.dim())};
  for (Eigen::Index m = 0; m < sym_dim; ++m)
    for (int a = 0; a < d; ++a)
      for (Eigen::Index n = 0; n < sym_dim; ++n)
        for (int b = 0; b < d; ++b)
          out.matrix(product_index(m, a, d), product_index(n, b, d)) =
              op.matrix(product_index(n, a, d), product_index(m, b, d));
  return out;
}

/// R_F = (Pi_{+,N+1})^{T_N} / D(N+1, d).
template <typename Scalar = double>
SymOperator<Scalar> build_RF(int copies, int local_dim) {
  SymOperator<Scalar> rf = partial_transpose_input(build_projector<Scalar>(copies, local_dim));
  rf.matrix /= static_cast<Scalar>(dimension(copies + 1, local_dim));
  return rf;
}

/// R_G = Tr_out[R_F (1_in (x) |0><0|)] (x) 1_out.
template <typename Scalar>
SymOperator<Scalar> build_RG(const SymOperator<Scalar>& rf) {
  const int d = rf.local_dim;
  const Eigen::Index sym_dim = rf.dim() / d;
  SymOperator<Scalar> rg{rf.copies, d, Matrix<Scalar>::Zero(rf.dim(), rf.dim())};
  for (Eigen::Index m = 0; m < sym_dim; ++m)
    for (Eigen::Index n = 0; n < sym_dim; ++n) {
      const Scalar reference = rf(m, 0, n, 0);
      for (int a = 0; a < d; ++a) rg.matrix(product_index(m, a, d), product_index(n, a, d)) = reference;
    }
  return rg;
}

template <typename Scalar = double>
SymOperator<Scalar> build_RG(int copies, int local_dim) {
  return build_RG(build_RF<Scalar>(copies, local_dim));
}

/// R_p = p R_F + (1 - p) R_G.
template <typename Scalar>
SymOperator<Scalar> build_Rp(const SymOperator<Scalar>& rf, const SymOperator<Scalar>& rg, Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1))) throw std::domain_error("build_Rp: p must lie in [0, 1]");
  if (rf.dim() != rg.dim()) throw std::invalid_argument("build_Rp: R_F and R_G dimensions differ");
  return {rf.copies, rf.local_dim, p * rf.matrix + (Scalar(1) - p) * rg.matrix};
}

template <typename Scalar = double>
SymOperator<Scalar> build_Rp(int copies, int local_dim, Scalar p) {
  const auto rf = build_RF<Scalar>(copies, local_dim);
  return build_Rp(rf, build_RG(rf), p);
}

/// Debug dump: header "N d dim", then the matrix row-major.
template <typename Scalar>
void write_operator(std::ostream& os, const SymOperator<Scalar>& op) {
  os << op.copies << ' ' << op.local_dim << ' ' << op.dim() << '\n';
  const auto old_precision = os.precision(17);
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    for (Eigen::Index c = 0; c < op.dim(); ++c) os << (c ? " " : "") << static_cast<double>(op.matrix(r, c));
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace mdm

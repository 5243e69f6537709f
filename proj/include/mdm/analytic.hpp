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

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "mdm/sym_basis.hpp"
#include "mdm/types.hpp"

// Closed-form results for the N-copy trade-off: the qubit curve, the qudit
// curve, the qubit block spectrum of R_p and the two-parameter optimal maps.
namespace mdm::analytic {

namespace detail {

// Rounding at the edges of the G domain can leave sqrt arguments at -1e-17.
template <typename Scalar>
Scalar edge_sqrt(Scalar x) {
  if (x < Scalar(-1e-14)) throw std::domain_error("analytic: argument outside the trade-off domain");
  using std::sqrt;
  return sqrt(std::max(x, Scalar(0)));
}

template <typename Scalar>
void check_alpha(Scalar alpha) {
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw std::domain_error("analytic: alpha must lie in [0, 1]");
}

}  // namespace detail

/// Optimal output fidelity F for N qubits at estimation fidelity G:
///   sqrt(F - 1/(N+2)) = sqrt((N+1)/(N+2) - G) + sqrt(N (G - N/(N+2))).
template <typename Scalar = double>
Scalar qubit_tradeoff_F(int copies, Scalar G) {
  const Scalar n = copies;
  const Scalar root = detail::edge_sqrt((n + 1) / (n + 2) - G) + detail::edge_sqrt(n * (G - n / (n + 2)));
  return Scalar(1) / (n + 2) + root * root;
}

/// Qudit generalisation:
///   sqrt(F - 1/(N+d)) = sqrt((d-1)((N+1)/(N+d) - G)) + sqrt(N (G - N/(N+d))).
template <typename Scalar = double>
Scalar qudit_tradeoff_F(int copies, int local_dim, Scalar G) {
  const Scalar n = copies;
  const Scalar d = local_dim;
  const Scalar root =
      detail::edge_sqrt((d - 1) * ((n + 1) / (n + d) - G)) + detail::edge_sqrt(n * (G - n / (n + d)));
  return Scalar(1) / (n + d) + root * root;
}

/// 2x2 block of (N+1)(N+2) R_p on span{|N,k-1>|0>, |N,k>|1>}.
template <typename Scalar = double>
struct QubitBlock {
  int copies;
  int k;
  Scalar p;
  Eigen::Matrix<Scalar, 2, 2> entries;
};

template <typename Scalar = double>
struct BlockEigenvalues {
  Scalar upper;  // mu_1
  Scalar lower;  // mu_2
};

template <typename Scalar = double>
QubitBlock<Scalar> qubit_block(int copies, int k, Scalar p) {
  if (k < 1 || k > copies) throw std::out_of_range("qubit_block: k must lie in 1..N");
  using std::sqrt;
  const Scalar n = copies;
  const Scalar kk = k;
  const Scalar off = p * sqrt(kk * (n - kk + 1));
  QubitBlock<Scalar> block{copies, k, p, {}};
  block.entries << n - kk + 2, off, off, n - kk + 1 + p * (2 * kk - n);
  return block;
}

/// mu_{1,2} = (2N + 3 - pN)/2 - k(1-p) +- sqrt((1 + pN)^2 - 4pk(1-p)) / 2.
template <typename Scalar = double>
BlockEigenvalues<Scalar> block_eigenvalues(int copies, int k, Scalar p) {
  using std::sqrt;
  const Scalar n = copies;
  const Scalar kk = k;
  const Scalar centre = (2 * n + 3 - p * n) / 2 - kk * (1 - p);
  const Scalar half_split = sqrt((1 + p * n) * (1 + p * n) - 4 * p * kk * (1 - p)) / 2;
  return {centre + half_split, centre - half_split};
}

template <typename Scalar = double>
struct ScalarEigenvalues {
  Scalar lambda_zero;  // on |N,0>|1>
  Scalar lambda_top;   // on |N,N>|0>
};

template <typename Scalar = double>
ScalarEigenvalues<Scalar> scalar_eigs(int copies, Scalar p) {
  const Scalar n = copies;
  const Scalar norm = (n + 1) * (n + 2);
  return {((1 - p) * n + 1) / norm, Scalar(1) / norm};
}

/// Every eigenvalue of the qubit R_p, ascending.
template <typename Scalar = double>
Vector<Scalar> qubit_spectrum(int copies, Scalar p) {
  const Scalar norm = Scalar(copies + 1) * Scalar(copies + 2);
  const auto singles = scalar_eigs(copies, p);
  Vector<Scalar> out(2 * (copies + 1));
  out(0) = singles.lambda_zero;
  out(1) = singles.lambda_top;
  for (int k = 1; k <= copies; ++k) {
    const auto mu = block_eigenvalues(copies, k, p);
    out(2 * k) = mu.upper / norm;
    out(2 * k + 1) = mu.lower / norm;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// One point on the ansatz curve in all three parametrisations:
///   (alpha, beta)            amplitudes on |0>^{N+1} and on sum_j |N_0=N-1,N_j=1>|j>/sqrt(d-1)
///   (alpha_bar, beta_bar)    |0>^{N+1} and S_N |0>^{N-1} |Phi_+>
///   (alpha_prime, beta_prime) qubit superposition form, d = 2 only
template <typename Scalar = double>
struct AnsatzParams {
  int copies = 0;
  int local_dim = 0;
  Scalar alpha = 1;
  Scalar beta = 0;
  Scalar alpha_bar = 1;
  Scalar beta_bar = 0;
  std::optional<Scalar> alpha_prime;
  std::optional<Scalar> beta_prime;
};

/// alpha_bar^2 + 2 alpha_bar beta_bar / sqrt(d) + (N+d-1)/(N d) beta_bar^2.
template <typename Scalar = double>
Scalar superposition_norm(int copies, int local_dim, Scalar alpha_bar, Scalar beta_bar) {
  using std::sqrt;
  const Scalar n = copies;
  const Scalar d = local_dim;
  return alpha_bar * alpha_bar + 2 * alpha_bar * beta_bar / sqrt(d) + (n + d - 1) / (n * d) * beta_bar * beta_bar;
}

/// S_N |0>^{N-1}|Phi_+> = (|0>^{N+1} + N^{-1/2} sum_j |N_0=N-1,N_j=1>|j>) / sqrt(d),
/// which fixes alpha = alpha_bar + beta_bar/sqrt(d) and
/// beta = beta_bar sqrt((d-1)/(N d)).
template <typename Scalar = double>
AnsatzParams<Scalar> convert_params(int copies, int local_dim, Scalar alpha, Scalar beta) {
  using std::abs;
  using std::sqrt;
  if (copies < 1 || local_dim < 2) throw std::invalid_argument("convert_params: need N >= 1, d >= 2");
  if (abs(alpha * alpha + beta * beta - 1) > Scalar(1e-10)) {
    throw std::invalid_argument("convert_params: alpha^2 + beta^2 must equal 1");
  }
  const Scalar n = copies;
  const Scalar d = local_dim;
  AnsatzParams<Scalar> params;
  params.copies = copies;
  params.local_dim = local_dim;
  params.alpha = alpha;
  params.beta = beta;
  params.beta_bar = beta * sqrt(d * n / (d - 1));
  params.alpha_bar = alpha - beta * sqrt(n / (d - 1));
  if (local_dim == 2) {
    params.alpha_prime = alpha - sqrt(n) * beta;
    params.beta_prime = sqrt(n + 1) * beta;
  }
  return params;
}

/// Inverse of convert_params on the (alpha_bar, beta_bar) side.
template <typename Scalar = double>
AnsatzParams<Scalar> from_superposition(int copies, int local_dim, Scalar alpha_bar, Scalar beta_bar) {
  using std::abs;
  using std::sqrt;
  if (abs(superposition_norm(copies, local_dim, alpha_bar, beta_bar) - 1) > Scalar(1e-10)) {
    throw std::invalid_argument("from_superposition: (alpha_bar, beta_bar) not normalised");
  }
  const Scalar n = copies;
  const Scalar d = local_dim;
  const Scalar alpha = alpha_bar + beta_bar / sqrt(d);
  const Scalar beta = beta_bar * sqrt((d - 1) / (d * n));
  return convert_params(copies, local_dim, alpha, beta);
}

/// Top eigenvector of M_1 on {|N,0>|0>, |N,1>|1>}, as (alpha, beta) >= 0.
template <typename Scalar = double>
AnsatzParams<Scalar> qubit_optimal_params(int copies, Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1))) throw std::domain_error("qubit_optimal_params: p must lie in [0, 1]");
  using std::sqrt;
  const auto block = qubit_block(copies, 1, p);
  const Scalar mu = block_eigenvalues(copies, 1, p).upper;
  // (mu - c, b) solves [[a, b], [b, c]] v = mu v with both components >= 0.
  Scalar x = mu - block.entries(1, 1);
  Scalar y = block.entries(0, 1);
  const Scalar norm = sqrt(x * x + y * y);
  return convert_params(copies, 2, x / norm, y / norm);
}

template <typename Scalar = double>
Fidelities<Scalar> qubit_parametric_fidelities(int copies, Scalar alpha) {
  detail::check_alpha(alpha);
  using std::sqrt;
  const Scalar n = copies;
  const Scalar beta = sqrt(std::max(Scalar(1) - alpha * alpha, Scalar(0)));
  const Scalar amp = sqrt(n) * alpha + beta;
  return {(amp * amp + 1) / (n + 2), (n + alpha * alpha) / (n + 2)};
}

template <typename Scalar = double>
Fidelities<Scalar> qudit_parametric_fidelities(int copies, int local_dim, Scalar alpha) {
  detail::check_alpha(alpha);
  using std::sqrt;
  const Scalar n = copies;
  const Scalar d = local_dim;
  const Scalar beta = sqrt(std::max(Scalar(1) - alpha * alpha, Scalar(0)));
  const Scalar amp = sqrt(n) * alpha + sqrt(d - 1) * beta;
  return {(amp * amp + 1) / (n + d), (n + alpha * alpha) / (n + d)};
}

/// sqrt(D) (alpha |0>^{N}|0> + beta/sqrt(d-1) sum_{j>=1} |N_0=N-1,N_j=1>|j>).
template <typename Scalar = double>
ChoiVector<Scalar> qudit_ansatz_vector(const AnsatzParams<Scalar>& params, const SymBasis& basis) {
  using std::abs;
  using std::sqrt;
  if (abs(params.alpha * params.alpha + params.beta * params.beta - 1) > Scalar(1e-10)) {
    throw std::invalid_argument("qudit_ansatz_vector: alpha^2 + beta^2 must equal 1");
  }
  if (basis.copies() != params.copies || basis.local_dim() != params.local_dim) {
    throw std::invalid_argument("qudit_ansatz_vector: basis does not match (N, d)");
  }
  const int d = params.local_dim;
  const Scalar root_dim = sqrt(static_cast<Scalar>(basis.size()));
  ChoiVector<Scalar> chi{params.copies, d, Vector<Scalar>::Zero(basis.size() * d)};
  chi.amplitudes(product_index(0, 0, d)) = root_dim * params.alpha;
  const Scalar spread = root_dim * params.beta / sqrt(static_cast<Scalar>(d - 1));
  for (int j = 1; j < d; ++j) chi.amplitudes(product_index(basis.single_excitation(j), j, d)) = spread;
  return chi;
}

template <typename Scalar = double>
struct ScalarProducts {
  Scalar A;           // <N_0=N-1,N_j=1|<0| N_0=N,N_j=1>
  Scalar B;           // <N_0=N,N_j=1| |0>^{N}|j>
  Scalar C_diag;      // C_jj
  Scalar C_offdiag;   // C_kj, k != j
};

template <typename Scalar = double>
ScalarProducts<Scalar> scalar_products(int copies, int local_dim) {
  if (copies < 1 || local_dim < 2) throw std::invalid_argument("scalar_products: need N >= 1, d >= 2");
  using std::sqrt;
  const Scalar n = copies;
  return {sqrt(n / (n + 1)), 1 / sqrt(n + 1), sqrt(2 / (n + 1)), sqrt(1 / (n + 1))};
}

}  // namespace mdm::analytic

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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "mdm/sym_basis.hpp"
#include "mdm/types.hpp"

// Monte Carlo oracle over the Haar measure. Everything here is an independent
// cross-check of the exact builders; none of it feeds back into them.
namespace mdm::mc {

using Rng = std::mt19937_64;

/// Estimate plus its standard error. For matrix estimates the error is the
/// largest per-entry standard error over real and imaginary parts.
template <typename T>
struct McEstimate {
  T value;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Normalised vector of i.i.d. standard complex Gaussians.
Eigen::VectorXcd sample_haar_state(int local_dim, Rng& rng);

/// QR of a complex Ginibre matrix with the columns of Q rephased by
/// R_ii / |R_ii|, which makes the distribution exactly Haar.
Eigen::MatrixXcd sample_haar_unitary(int local_dim, Rng& rng);

/// <{N_i}; N| psi^{(x)N}> = sqrt(N! / prod N_i!) prod psi_i^{N_i}, for every
/// basis state.
Eigen::VectorXcd symmetric_amplitudes(const SymBasis& basis, const Eigen::VectorXcd& psi);

/// <S|U^{(x)N}|S'> on the symmetric subspace, computed through the explicit
/// tensor-product embedding.
Eigen::MatrixXcd symmetric_representation(const SymBasis& basis, const Eigen::MatrixXcd& unitary);

/// Per-worker generator for worker `index` of a run seeded with `seed`.
Rng worker_rng(std::uint64_t seed, unsigned index);

/// Average of [psi^{(x)N}]^T (x) psi over Haar-random psi, on H_{+,N} (x) H_d.
McEstimate<Eigen::MatrixXcd> mc_RF(int copies, int local_dim, std::int64_t samples, std::uint64_t seed,
                                   unsigned workers = 1);

struct McFidelities {
  McEstimate<double> output;      // F
  McEstimate<double> estimation;  // G
};

/// Unbiased F and G for a given map: per-sample quadratic forms of chi with the
/// sampled R_F term and its R_G reduction.
McFidelities mc_fidelities(const ChoiVector<double>& chi, std::int64_t samples, std::uint64_t seed,
                           unsigned workers = 1);

struct CompletenessCheck {
  Eigen::MatrixXcd mean;                // estimate of int U*^{(x)N} Tr_out[chi] U^{T(x)N} dU
  McEstimate<double> deviation;         // max |mean - 1|
  double scaled_deviation = 0.0;        // max |mean - (Tr chi / D) 1|
};

/// Estimates the completeness integral of the covariant instrument generated by
/// chi. For a trace-preserving map the mean is the identity.
CompletenessCheck mc_completeness(const ChoiVector<double>& chi, std::int64_t samples, std::uint64_t seed,
                                  unsigned workers = 1);

}  // namespace mdm::mc

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
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mdm/analytic.hpp"
#include "mdm/operators.hpp"
#include "mdm/sym_basis.hpp"
#include "mdm/types.hpp"

namespace mdm {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gap below which the top eigenvalue is treated as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-9;

template <typename Scalar = double>
struct EigenPair {
  Scalar value;
  Vector<Scalar> vector;  // unit norm, sign fixed
  Scalar gap;             // lambda_1 - lambda_2
  bool degenerate;
  Vector<Scalar> spectrum;  // ascending
};

/// Makes the amplitude at index 0 nonnegative, or, when that one vanishes, the
/// first amplitude above 1e-12 in index order.
template <typename Derived>
void apply_sign_convention(Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (abs(v(i)) > Scalar(1e-12)) {
      if (v(i) < Scalar(0)) v = -v;
      return;
    }
  }
}

template <typename Scalar>
EigenPair<Scalar> max_eigenpair(const Matrix<Scalar>& matrix, Scalar tol = Scalar(kDegeneracyTolerance)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw std::invalid_argument("max_eigenpair: need a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(matrix);
  if (solver.info() != Eigen::Success) throw ConvergenceError("max_eigenpair: eigensolver did not converge");
  const Eigen::Index n = matrix.rows();
  const auto& values = solver.eigenvalues();
  EigenPair<Scalar> out;
  out.value = values(n - 1);
  out.vector = solver.eigenvectors().col(n - 1);
  apply_sign_convention(out.vector);
  out.gap = n > 1 ? values(n - 1) - values(n - 2) : std::numeric_limits<Scalar>::infinity();
  out.degenerate = out.gap < tol;
  out.spectrum = values;
  return out;
}

template <typename Scalar>
EigenPair<Scalar> max_eigenpair(const SymOperator<Scalar>& op, Scalar tol = Scalar(kDegeneracyTolerance)) {
  return max_eigenpair(op.matrix, tol);
}

template <typename Scalar = double>
struct OptimalMap {
  ChoiVector<Scalar> chi;
  Scalar lambda_max;
  Scalar gap;
  bool degenerate;
};

/// Top eigenvector of R_p scaled to squared norm D(N, d). A top eigenspace
/// narrower than `tol` is resolved by maximising <chi|R_F|chi> inside it.
template <typename Scalar>
OptimalMap<Scalar> optimal_map(const SymOperator<Scalar>& rf, const SymOperator<Scalar>& rg, Scalar p,
                               Scalar tol = Scalar(kDegeneracyTolerance)) {
  if (!(p > Scalar(0) && p < Scalar(1))) {
    throw std::domain_error("optimal_map: p must lie strictly inside (0, 1); use endpoint_maps at the ends");
  }
  using std::sqrt;
  const auto rp = build_Rp(rf, rg, p);
  const Scalar trace_target = static_cast<Scalar>(dimension(rf.copies, rf.local_dim));

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(rp.matrix);
  if (solver.info() != Eigen::Success) throw ConvergenceError("optimal_map: eigensolver did not converge");
  const Eigen::Index n = rp.dim();
  const auto& values = solver.eigenvalues();
  const Scalar top = values(n - 1);
  const Scalar gap = n > 1 ? top - values(n - 2) : std::numeric_limits<Scalar>::infinity();

  Vector<Scalar> v;
  if (gap >= tol) {
    v = solver.eigenvectors().col(n - 1);
  } else {
    Eigen::Index width = 1;
    while (width < n && top - values(n - 1 - width) < tol) ++width;
    const Matrix<Scalar> span = solver.eigenvectors().rightCols(width);
    const Matrix<Scalar> restricted = span.transpose() * rf.matrix * span;
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> inner(restricted);
    v = span * inner.eigenvectors().col(width - 1);
    v.normalize();
  }
  apply_sign_convention(v);
  return {{rf.copies, rf.local_dim, v * sqrt(trace_target)}, top, gap, gap < tol};
}

template <typename Scalar = double>
OptimalMap<Scalar> optimal_map(int copies, int local_dim, Scalar p) {
  const auto rf = build_RF<Scalar>(copies, local_dim);
  return optimal_map(rf, build_RG(rf), p);
}

/// F = <chi|R_F|chi>, G = <chi|R_G|chi>.
template <typename Scalar>
Fidelities<Scalar> fidelities(const ChoiVector<Scalar>& chi, const SymOperator<Scalar>& rf,
                              const SymOperator<Scalar>& rg) {
  if (chi.amplitudes.size() != rf.dim() || rf.dim() != rg.dim()) {
    throw std::invalid_argument("fidelities: dimension mismatch between chi, R_F and R_G");
  }
  const auto& x = chi.amplitudes;
  return {x.dot(rf.matrix * x), x.dot(rg.matrix * x)};
}

template <typename Scalar = double>
struct EndpointMaps {
  ChoiVector<Scalar> estimation;  // alpha = 1: F = G = (N+1)/(N+d)
  ChoiVector<Scalar> identity;    // F = 1, G = N/(N+d-1)
};

/// Both ends of the curve, built from the ansatz directly: R_0 and R_1 have
/// degenerate top eigenvalues, so eigensolving there is ill-posed.
template <typename Scalar = double>
EndpointMaps<Scalar> endpoint_maps(int copies, int local_dim) {
  if (copies < 1) throw std::invalid_argument("endpoint_maps: need N >= 1");
  using std::sqrt;
  const SymBasis basis(copies, local_dim);
  const Scalar n = copies;
  const Scalar d = local_dim;
  const Scalar alpha = sqrt(n / (n + d - 1));
  const Scalar beta = sqrt((d - 1) / (n + d - 1));
  return {analytic::qudit_ansatz_vector(analytic::convert_params<Scalar>(copies, local_dim, 1, 0), basis),
          analytic::qudit_ansatz_vector(analytic::convert_params(copies, local_dim, alpha, beta), basis)};
}

/// Fraction of |chi|^2 carried by |0>^{N}|0> and the |N_0=N-1,N_j=1>|j> states.
template <typename Scalar>
Scalar ansatz_support_fraction(const ChoiVector<Scalar>& chi, const SymBasis& basis) {
  const int d = chi.local_dim;
  Scalar inside = chi.amplitudes(product_index(0, 0, d)) * chi.amplitudes(product_index(0, 0, d));
  for (int j = 1; j < d; ++j) {
    const Scalar a = chi.amplitudes(product_index(basis.single_excitation(j), j, d));
    inside += a * a;
  }
  return inside / chi.amplitudes.squaredNorm();
}

template <typename Scalar = double>
struct TradeoffPoint {
  Scalar p;
  Scalar F;
  Scalar G;
  Scalar lambda_max;
  Scalar alpha;
  Scalar beta;
  Scalar gap;
  bool degenerate = false;
};

/// Evaluates one map against (R_F, R_G); alpha is read off |0>^{N+1}.
template <typename Scalar>
TradeoffPoint<Scalar> make_point(Scalar p, const OptimalMap<Scalar>& map, const SymOperator<Scalar>& rf,
                                 const SymOperator<Scalar>& rg) {
  using std::sqrt;
  const auto fid = fidelities(map.chi, rf, rg);
  const Scalar root_dim = sqrt(static_cast<Scalar>(dimension(rf.copies, rf.local_dim)));
  const Scalar alpha = std::clamp(map.chi.amplitudes(0) / root_dim, Scalar(0), Scalar(1));
  const Scalar beta = std::clamp(sqrt(std::max(Scalar(1) - alpha * alpha, Scalar(0))), Scalar(0), Scalar(1));
  return {p, fid.output, fid.estimation, map.lambda_max, alpha, beta, map.gap, map.degenerate};
}

/// `points` uniform values on [lo, hi].
template <typename Scalar = double>
std::vector<Scalar> uniform_grid(int points, Scalar lo, Scalar hi) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need at least two points");
  std::vector<Scalar> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * Scalar(i) / Scalar(points - 1);
  grid.back() = hi;
  return grid;
}

inline std::vector<double> default_p_grid() { return uniform_grid(101, 0.005, 0.995); }

/// One point per grid value, in grid order. Points are independent and are
/// spread over `threads` workers sharing read-only R_F, R_G.
template <typename Scalar>
std::vector<TradeoffPoint<Scalar>> tradeoff_sweep(const SymOperator<Scalar>& rf, const SymOperator<Scalar>& rg,
                                                  const std::vector<Scalar>& grid, unsigned threads = 1) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > Scalar(0) && grid[i] < Scalar(1))) {
      throw std::domain_error("tradeoff_sweep: grid values must lie strictly inside (0, 1)");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("tradeoff_sweep: grid must be increasing");
  }
  std::vector<TradeoffPoint<Scalar>> points(grid.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < grid.size(); i += stride) {
      points[i] = make_point(grid[i], optimal_map(rf, rg, grid[i]), rf, rg);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return points;
}

template <typename Scalar = double>
std::vector<TradeoffPoint<Scalar>> tradeoff_sweep(int copies, int local_dim, const std::vector<Scalar>& grid,
                                                  unsigned threads = 1) {
  const auto rf = build_RF<Scalar>(copies, local_dim);
  return tradeoff_sweep(rf, build_RG(rf), grid, threads);
}

}  // namespace mdm

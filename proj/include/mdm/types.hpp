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

#include <Eigen/Dense>

namespace mdm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Flat index of (symmetric state m, output letter a) in H_{+,N} (x) H_d.
inline Eigen::Index product_index(Eigen::Index sym, int letter, int local_dim) {
  return sym * local_dim + letter;
}

/// Amplitudes of |chi> on H_{+,N} (x) H_d. The map it generates is trace
/// preserving when the squared norm equals D(N, d).
template <typename Scalar = double>
struct ChoiVector {
  int copies = 0;
  int local_dim = 0;
  Vector<Scalar> amplitudes;

  Scalar trace() const { return amplitudes.squaredNorm(); }
};

template <typename Scalar = double>
struct Fidelities {
  Scalar output;      // F
  Scalar estimation;  // G
};

}  // namespace mdm

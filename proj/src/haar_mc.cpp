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

#include "mdm/haar_mc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mdm::mc {

namespace {

using Complex = std::complex<double>;

void check_local_dim(int local_dim) {
  if (local_dim < 2) throw std::invalid_argument("haar_mc: local dimension must be >= 2");
}

void check_samples(std::int64_t samples) {
  if (samples < 1) throw std::invalid_argument("haar_mc: need at least one sample");
}

Eigen::VectorXcd ginibre_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

// Running sums for a matrix-valued sample mean with per-entry variance.
struct MatrixMoments {
  Eigen::MatrixXcd sum;
  Eigen::MatrixXd sum_sq_re;
  Eigen::MatrixXd sum_sq_im;
  std::int64_t count = 0;

  explicit MatrixMoments(Eigen::Index n)
      : sum(Eigen::MatrixXcd::Zero(n, n)), sum_sq_re(Eigen::MatrixXd::Zero(n, n)),
        sum_sq_im(Eigen::MatrixXd::Zero(n, n)) {}

  void add(const Eigen::MatrixXcd& term) {
    sum += term;
    sum_sq_re += term.real().cwiseAbs2();
    sum_sq_im += term.imag().cwiseAbs2();
    ++count;
  }

  void merge(const MatrixMoments& other) {
    sum += other.sum;
    sum_sq_re += other.sum_sq_re;
    sum_sq_im += other.sum_sq_im;
    count += other.count;
  }

  Eigen::MatrixXcd mean() const { return sum / static_cast<double>(count); }

  double max_std_error() const {
    if (count < 2) return std::numeric_limits<double>::infinity();
    const double s = static_cast<double>(count);
    const Eigen::MatrixXcd m = mean();
    const Eigen::MatrixXd var_re = (sum_sq_re / s - m.real().cwiseAbs2()) * (s / (s - 1));
    const Eigen::MatrixXd var_im = (sum_sq_im / s - m.imag().cwiseAbs2()) * (s / (s - 1));
    const double worst = std::max(var_re.maxCoeff(), var_im.maxCoeff());
    return std::sqrt(std::max(worst, 0.0) / s);
  }
};

struct ScalarMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const ScalarMoments& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
    count += other.count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double std_error() const {
    if (count < 2) return std::numeric_limits<double>::infinity();
    const double s = static_cast<double>(count);
    const double m = mean();
    const double var = (sum_sq / s - m * m) * (s / (s - 1));
    return std::sqrt(std::max(var, 0.0) / s);
  }
};

// Splits `samples` over `workers`, each with its own derived generator, and
// merges the per-worker accumulators in worker order.
template <typename Acc, typename MakeAcc, typename Step>
Acc run_workers(std::int64_t samples, std::uint64_t seed, unsigned workers, MakeAcc make_acc, Step step) {
  workers = std::max(1u, static_cast<unsigned>(std::min<std::int64_t>(workers, samples)));
  std::vector<Acc> partial;
  partial.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) partial.push_back(make_acc());

  auto body = [&](unsigned w) {
    Rng rng = worker_rng(seed, w);
    const std::int64_t share = samples / workers + (w < samples % workers ? 1 : 0);
    for (std::int64_t i = 0; i < share; ++i) step(partial[w], rng);
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
  }
  Acc total = std::move(partial[0]);
  for (unsigned w = 1; w < workers; ++w) total.merge(partial[w]);
  return total;
}

// (x) of U over every qudit of a d^N amplitude vector, first qudit most
// significant.
Eigen::VectorXcd apply_tensor_power(const Eigen::MatrixXcd& unitary, Eigen::VectorXcd x, int copies) {
  const Eigen::Index d = unitary.rows();
  Eigen::Index stride = x.size();
  Eigen::VectorXcd slice(d);
  for (int q = 0; q < copies; ++q) {
    stride /= d;
    const Eigen::Index block = stride * d;
    for (Eigen::Index outer = 0; outer < x.size(); outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        for (Eigen::Index k = 0; k < d; ++k) slice(k) = x(outer + k * stride + inner);
        slice = unitary * slice;
        for (Eigen::Index k = 0; k < d; ++k) x(outer + k * stride + inner) = slice(k);
      }
    }
  }
  return x;
}

Eigen::MatrixXcd symmetric_representation(const Eigen::MatrixXd& isometry, const Eigen::MatrixXcd& unitary,
                                          int copies) {
  Eigen::MatrixXcd image(isometry.rows(), isometry.cols());
  for (Eigen::Index c = 0; c < isometry.cols(); ++c) {
    image.col(c) = apply_tensor_power(unitary, isometry.col(c).cast<Complex>(), copies);
  }
  return isometry.transpose().cast<Complex>() * image;
}

// conj(v) (x) psi in the sym * d + letter layout.
Eigen::VectorXcd transposed_product(const Eigen::VectorXcd& sym, const Eigen::VectorXcd& psi) {
  const Eigen::Index d = psi.size();
  Eigen::VectorXcd w(sym.size() * d);
  for (Eigen::Index m = 0; m < sym.size(); ++m) w.segment(m * d, d) = std::conj(sym(m)) * psi;
  return w;
}

void check_chi(const ChoiVector<double>& chi) {
  if (chi.copies < 1) throw std::invalid_argument("haar_mc: chi needs N >= 1");
  check_local_dim(chi.local_dim);
  const auto expected = static_cast<Eigen::Index>(dimension(chi.copies, chi.local_dim)) * chi.local_dim;
  if (chi.amplitudes.size() != expected) throw std::invalid_argument("haar_mc: chi has the wrong length");
}

}  // namespace

Rng worker_rng(std::uint64_t seed, unsigned index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), index};
  return Rng(seq);
}

Eigen::VectorXcd sample_haar_state(int local_dim, Rng& rng) {
  check_local_dim(local_dim);
  Eigen::VectorXcd v = ginibre_vector(local_dim, rng);
  return v / v.norm();
}

Eigen::MatrixXcd sample_haar_unitary(int local_dim, Rng& rng) {
  check_local_dim(local_dim);
  Eigen::MatrixXcd z(local_dim, local_dim);
  for (int c = 0; c < local_dim; ++c) z.col(c) = ginibre_vector(local_dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(local_dim, local_dim);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int i = 0; i < local_dim; ++i) {
    const double magnitude = std::abs(r(i, i));
    if (magnitude > 0.0) q.col(i) *= r(i, i) / magnitude;
  }
  return q;
}

Eigen::VectorXcd symmetric_amplitudes(const SymBasis& basis, const Eigen::VectorXcd& psi) {
  if (psi.size() != basis.local_dim()) throw std::invalid_argument("symmetric_amplitudes: dimension mismatch");
  const int n = basis.copies();
  Eigen::VectorXcd out(basis.size());
  for (Eigen::Index s = 0; s < basis.size(); ++s) {
    const auto& occ = basis.state(s);
    double log_multinomial = std::lgamma(n + 1.0);
    Complex product(1.0, 0.0);
    for (int j = 0; j < occ.dimension(); ++j) {
      log_multinomial -= std::lgamma(occ[j] + 1.0);
      for (int r = 0; r < occ[j]; ++r) product *= psi(j);
    }
    out(s) = std::exp(0.5 * log_multinomial) * product;
  }
  return out;
}

Eigen::MatrixXcd symmetric_representation(const SymBasis& basis, const Eigen::MatrixXcd& unitary) {
  if (unitary.rows() != basis.local_dim() || unitary.cols() != basis.local_dim()) {
    throw std::invalid_argument("symmetric_representation: unitary has the wrong size");
  }
  return symmetric_representation(embedding_isometry(basis), unitary, basis.copies());
}

McEstimate<Eigen::MatrixXcd> mc_RF(int copies, int local_dim, std::int64_t samples, std::uint64_t seed,
                                   unsigned workers) {
  check_local_dim(local_dim);
  check_samples(samples);
  const SymBasis basis(copies, local_dim);
  const Eigen::Index dim = basis.size() * local_dim;

  const auto moments = run_workers<MatrixMoments>(
      samples, seed, workers, [&] { return MatrixMoments(dim); },
      [&](MatrixMoments& acc, Rng& rng) {
        const Eigen::VectorXcd psi = sample_haar_state(local_dim, rng);
        const Eigen::VectorXcd w = transposed_product(symmetric_amplitudes(basis, psi), psi);
        acc.add(w * w.adjoint());
      });
  return {moments.mean(), moments.max_std_error(), samples, seed};
}

McFidelities mc_fidelities(const ChoiVector<double>& chi, std::int64_t samples, std::uint64_t seed,
                           unsigned workers) {
  check_chi(chi);
  check_samples(samples);
  const int d = chi.local_dim;
  const SymBasis basis(chi.copies, d);
  const Eigen::VectorXcd amplitudes = chi.amplitudes.cast<Complex>();
  // Row m, column a holds chi(m, a).
  const Eigen::MatrixXcd slices =
      Eigen::Map<const Eigen::MatrixXd>(chi.amplitudes.data(), d, basis.size()).transpose().cast<Complex>();

  struct Pair {
    ScalarMoments output, estimation;
    void merge(const Pair& other) {
      output.merge(other.output);
      estimation.merge(other.estimation);
    }
  };
  const auto moments = run_workers<Pair>(
      samples, seed, workers, [] { return Pair{}; },
      [&](Pair& acc, Rng& rng) {
        const Eigen::VectorXcd psi = sample_haar_state(d, rng);
        const Eigen::VectorXcd sym = symmetric_amplitudes(basis, psi);
        acc.output.add(std::norm(amplitudes.dot(transposed_product(sym, psi))));
        // R_G term: |psi_0|^2 |conj(v)><conj(v)| (x) 1.
        const Eigen::VectorXcd overlaps = slices.transpose() * sym.conjugate();
        acc.estimation.add(std::norm(psi(0)) * overlaps.squaredNorm());
      });
  return {{moments.output.mean(), moments.output.std_error(), samples, seed},
          {moments.estimation.mean(), moments.estimation.std_error(), samples, seed}};
}

CompletenessCheck mc_completeness(const ChoiVector<double>& chi, std::int64_t samples, std::uint64_t seed,
                                  unsigned workers) {
  check_chi(chi);
  check_samples(samples);
  const int d = chi.local_dim;
  const SymBasis basis(chi.copies, d);
  const Eigen::MatrixXd isometry = embedding_isometry(basis);
  const Eigen::MatrixXd slices = Eigen::Map<const Eigen::MatrixXd>(chi.amplitudes.data(), d, basis.size());
  const Eigen::MatrixXcd reduced = (slices.transpose() * slices).cast<Complex>();  // Tr_out chi

  const auto moments = run_workers<MatrixMoments>(
      samples, seed, workers, [&] { return MatrixMoments(basis.size()); },
      [&](MatrixMoments& acc, Rng& rng) {
        const Eigen::MatrixXcd rep = symmetric_representation(isometry, sample_haar_unitary(d, rng), chi.copies);
        acc.add(rep.conjugate() * reduced * rep.transpose());
      });

  CompletenessCheck out;
  out.mean = moments.mean();
  const auto identity = Eigen::MatrixXcd::Identity(basis.size(), basis.size());
  const double scale = chi.trace() / static_cast<double>(basis.size());
  out.deviation = {(out.mean - identity).cwiseAbs().maxCoeff(), moments.max_std_error(), samples, seed};
  out.scaled_deviation = (out.mean - scale * identity).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace mdm::mc

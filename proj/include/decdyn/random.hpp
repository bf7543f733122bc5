// Copyright 2026 The decdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random matrices for sampled checks and property tests.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "decdyn/linalg.hpp"

namespace decdyn {

using Rng = std::mt19937_64;

/// Entries i.i.d. complex Gaussian with E|z|^2 = scale^2.
inline ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                                     double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(2.0));
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

inline ComplexVector gaussian_vector(std::size_t n, Rng& rng) {
  return gaussian_matrix(n, 1, rng).col(0);
}

inline ComplexMatrix random_hermitian(std::size_t d, Rng& rng, double scale = 1.0) {
  return hermitian_part(gaussian_matrix(d, d, rng, scale));
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the R-phase fix).
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

/// Wishart-type PSD matrix G G^dagger with G of shape d x rank.
inline ComplexMatrix random_psd(std::size_t d, std::size_t rank, Rng& rng,
                                double scale = 1.0) {
  const ComplexMatrix g = gaussian_matrix(d, rank, rng, scale);
  return g * g.adjoint();
}

/// Random density matrix of the given rank (trace one).
inline ComplexMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
  ComplexMatrix p = random_psd(d, rank, rng);
  return p / p.trace().real();
}

/// List of `count` Gaussian Kraus operators, each scaled by `scale`.
inline std::vector<ComplexMatrix> random_kraus_list(std::size_t d, std::size_t count,
                                                    Rng& rng, double scale) {
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(gaussian_matrix(d, d, rng, scale));
  return out;
}

}  // namespace decdyn

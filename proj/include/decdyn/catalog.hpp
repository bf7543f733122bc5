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

// Reference maps with known positions in the cone hierarchy.

#pragma once

#include <cstddef>

#include "decdyn/linalg.hpp"
#include "decdyn/qmaps.hpp"

namespace decdyn::catalog {

inline SuperOperator identity_map(std::size_t d) { return SuperOperator::identity(d); }

inline SuperOperator transpose(std::size_t d) { return transpose_map(d); }

/// X -> Tr(X) 1 / d.
inline SuperOperator completely_depolarizing(std::size_t d) {
  const ComplexMatrix one = identity(d);
  SuperOperator s = SuperOperator::zero(d);
  s.matrix = vec(one) * vec(one).adjoint() / static_cast<double>(d);
  return s;
}

/// Choi's positive, indecomposable map on M_3: the diagonal of the output is
/// (a11 + a33, a22 + a11, a33 + a22) and off-diagonal entries are -a_ij.
inline SuperOperator choi_map() {
  constexpr std::size_t d = 3;
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j) m(i * d + j, i * d + j) = -1.0;
    }
  }
  // out_ii gathers a_ii and a_{i-1,i-1} (cyclically).
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t prev = (i + d - 1) % d;
    m(i * d + i, i * d + i) = 1.0;
    m(i * d + i, prev * d + prev) = 1.0;
  }
  return {d, std::move(m)};
}

/// Cyclic shift |i> -> |i+1 mod d>.
inline ComplexMatrix cyclic_shift(std::size_t d) {
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < d; ++i) u((i + 1) % d, i) = 1.0;
  return u;
}

}  // namespace decdyn::catalog

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

// Shows that Choi's positive map on M_3 is not decomposable: prints the
// cone verdicts of its Choi matrix and checks the PPT witness by hand.

#include <cstdio>

#include "decdyn/decdyn.hpp"

int main() {
  using namespace decdyn;
  const SuperOperator phi = catalog::choi_map();
  const ChoiMatrix c = choi_of(phi);

  std::printf("sampled positivity: min eigenvalue %.3e\n",
              positivity_sample_test(phi, 200, 1).min_eigenvalue);
  std::printf("CP:   %d (min eigenvalue %.6f)\n", is_cp(c).member, is_cp(c).margin);
  std::printf("coCP: %d (min eigenvalue %.6f)\n", is_cocp(c).member, is_cocp(c).margin);

  const ConeVerdict dec = is_decomposable(c);
  std::printf("decomposable: %d after %zu iterations (%s)\n", dec.member, dec.iterations,
              dec.method.c_str());
  if (!dec.witness) return 0;
  const ComplexMatrix& w = *dec.witness;
  std::printf("witness: min eig W = %.3e, min eig W^G = %.3e, <C, W> = %.6f\n",
              min_eigenvalue(hermitian_part(w)),
              min_eigenvalue(hermitian_part(partial_transpose(w, 3, 3))),
              frobenius_pairing(c.matrix, w));
  return 0;
}

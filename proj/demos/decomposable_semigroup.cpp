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

// Builds a random generator with CP and coCP Kraus terms and follows its
// semigroup: every e^{tL} stays unital and decomposable, while the CP test
// fails at some times because of the transpose terms.

#include <cstdio>

#include "decdyn/decdyn.hpp"

int main() {
  using namespace decdyn;
  Rng rng(2026);
  const DecomposableGeneratorSpec spec{random_hermitian(2, rng),
                                       random_kraus_list(2, 1, rng, 0.5),
                                       random_kraus_list(2, 2, rng, 0.8)};
  const SuperOperator l = build_standard_heisenberg(spec);
  const SemigroupScan scan = scan_semigroup(l, default_scan_times());
  std::printf("%6s %12s %5s %5s %5s\n", "t", "unital_def", "CP", "coCP", "Dec");
  for (const SemigroupPoint& p : scan.points) {
    std::printf("%6.2f %12.3e %5d %5d %5d\n", p.t, p.unital_defect, p.cp.member, p.cocp.member,
                p.decomposable.member);
  }
  return 0;
}

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "decdyn/qmaps.hpp"
#include "decdyn/random.hpp"
#include "test_support.hpp"

using namespace decdyn;
using Catch::Matchers::WithinAbs;

namespace {

SuperOperator random_superop(std::size_t d, Rng& rng) {
  return {d, gaussian_matrix(d * d, d * d, rng)};
}

SuperOperator random_cp(std::size_t d, std::size_t rank, Rng& rng) {
  return superop_from_kraus({random_kraus_list(d, rank, rng, 1.0), KrausSide::cp});
}

}  // namespace

TEST_CASE("apply", "[qmaps]") {
  Rng rng(1);
  const ComplexMatrix x = gaussian_matrix(3, 3, rng);
  CHECK(decdyn::apply(SuperOperator::identity(3), x) == x);
  CHECK(decdyn::apply(transpose_map(2), matrix_unit(2, 2, 0, 1)) == matrix_unit(2, 2, 1, 0));
  const SuperOperator flip = superop_from_kraus({{pauli::x()}, KrausSide::cp});
  CHECK((decdyn::apply(flip, pauli::z()) + pauli::z()).norm() <= 1e-15);
  CHECK_THROWS_AS(decdyn::apply(flip, identity(3)), DimensionError);
  CHECK_THROWS_AS(SuperOperator(2, identity(3)), DimensionError);
}

TEST_CASE("compose and dual", "[qmaps]") {
  CHECK(dual(SuperOperator::identity(2)).matrix == identity(4));
  CHECK(compose(transpose_map(3), transpose_map(3)).matrix == identity(9));

  const ComplexMatrix v = pauli::minus();
  const SuperOperator conj_v = sandwich(v, v.adjoint());
  const SuperOperator conj_vdag = sandwich(v.adjoint(), v);
  CHECK((dual(conj_v).matrix - conj_vdag.matrix).norm() <= 1e-15);

  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const SuperOperator a = random_superop(2, rng);
    const SuperOperator b = random_superop(2, rng);
    CHECK(dual(dual(a)).matrix == a.matrix);
    CHECK((dual(compose(a, b)).matrix - compose(dual(b), dual(a)).matrix).norm() <= 1e-12);
    // Hilbert-Schmidt adjoint: Tr(X^dag A(Y)) = Tr(A^*(X)^dag Y)
    const ComplexMatrix x = gaussian_matrix(2, 2, rng);
    const ComplexMatrix y = gaussian_matrix(2, 2, rng);
    const Complex lhs = (x.adjoint() * decdyn::apply(a, y)).trace();
    const Complex rhs = (decdyn::apply(dual(a), x).adjoint() * y).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
  CHECK_THROWS_AS(compose(SuperOperator::identity(2), SuperOperator::identity(3)), DimensionError);
}

TEST_CASE("choi_of and superop_of", "[qmaps]") {
  const ChoiMatrix id = choi_of(SuperOperator::identity(2));
  CHECK(id.matrix == testing::max_entangled(2));
  const EigenDecomposition e = herm_eig(id.matrix);
  CHECK_THAT(e.eigenvalues(3), WithinAbs(2.0, 1e-14));
  CHECK_THAT(e.eigenvalues(0), WithinAbs(0.0, 1e-14));

  CHECK(choi_of(transpose_map(2)).matrix == testing::swap_operator(2));

  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const SuperOperator s = random_superop(3, rng);
    CHECK(choi_of(s).matrix == testing::brute_choi(s));
    CHECK(superop_of(choi_of(s)).matrix == s.matrix);
  }
  SECTION("rectangular maps") {
    const ComplexMatrix k = gaussian_matrix(3, 2, rng);
    const SuperOperator s = superop_from_kraus({{k}, KrausSide::cp});
    CHECK(s.dim_in == 2);
    CHECK(s.dim_out == 3);
    CHECK((choi_of(s).matrix - testing::brute_choi(s)).norm() == 0.0);
    CHECK(superop_of(choi_of(s)).matrix == s.matrix);
  }
}

TEST_CASE("partial traces of the Choi matrix", "[qmaps][property]") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    // Trace-preserving CP map: Kraus family completed by a Cholesky factor.
    std::vector<ComplexMatrix> ks = random_kraus_list(3, 2, rng, 0.4);
    ComplexMatrix g = ComplexMatrix::Zero(3, 3);
    for (const auto& k : ks) g += k.adjoint() * k;
    const ComplexMatrix rest = (3.0 * identity(3) - g) / 3.0;
    const ComplexMatrix scaled_rest = rest.llt().matrixU();
    for (auto& k : ks) k /= std::sqrt(3.0);
    ks.push_back(scaled_rest);
    const SuperOperator s = superop_from_kraus({ks, KrausSide::cp});
    const ChoiMatrix c = choi_of(s);
    CHECK(trace_preservation_defect(s) <= 1e-12);
    CHECK((testing::trace_second(c.matrix, 3, 3) - identity(3)).norm() <= 1e-11);
    CHECK((testing::trace_first(c.matrix, 3, 3) - unit_image(s)).norm() <= 1e-12);
  }
  const SuperOperator amp = superop_from_kraus({{pauli::minus()}, KrausSide::cp});
  CHECK((testing::trace_second(choi_of(amp).matrix, 2, 2) - identity(2)).norm() > 0.5);
}

TEST_CASE("transpose_map", "[qmaps]") {
  const SuperOperator tau = transpose_map(2);
  const ComplexMatrix sym = (ComplexMatrix(2, 2) << 1, Complex(2, 1), Complex(2, 1), 3).finished();
  CHECK(decdyn::apply(tau, sym) == sym);
  CHECK(decdyn::apply(tau, pauli::y()) == -pauli::y());
  CHECK(compose(tau, tau).matrix == identity(4));
}

TEST_CASE("extend", "[qmaps]") {
  CHECK(extend(SuperOperator::identity(2), 3).matrix == identity(36));

  Rng rng(5);
  const ComplexMatrix a = gaussian_matrix(2, 2, rng), b = gaussian_matrix(2, 2, rng),
                      c = gaussian_matrix(2, 2, rng), d = gaussian_matrix(2, 2, rng);
  ComplexMatrix block(4, 4);
  block << a, b, c, d;
  ComplexMatrix expected(4, 4);
  expected << a.transpose(), b.transpose(), c.transpose(), d.transpose();
  CHECK(decdyn::apply(extend(transpose_map(2), 2), block) == expected);

  SECTION("blockwise action of a general map") {
    const SuperOperator s(2, gaussian_matrix(4, 4, rng));
    const ComplexMatrix x = gaussian_matrix(6, 6, rng);
    const ComplexMatrix out = decdyn::apply(extend(s, 3), x);
    for (Eigen::Index p = 0; p < 3; ++p)
      for (Eigen::Index q = 0; q < 3; ++q)
        CHECK((out.block(2 * p, 2 * q, 2, 2) - decdyn::apply(s, x.block(2 * p, 2 * q, 2, 2))).norm() <=
              1e-13);
  }
  SECTION("Choi positivity is stable under extension") {
    for (int trial = 0; trial < 10; ++trial) {
      const SuperOperator s = random_cp(2, 1 + trial % 3, rng);
      for (std::size_t n = 1; n <= 3; ++n) {
        CHECK(min_eigenvalue(choi_of(extend(s, n)).matrix) >= -1e-10);
      }
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      CHECK(min_eigenvalue(choi_of(extend(transpose_map(2), n)).matrix) < -0.5);
    }
  }
  CHECK_THROWS_AS(extend(transpose_map(2), 0), InvalidArgument);
}

TEST_CASE("superop_from_kraus", "[qmaps]") {
  CHECK(superop_from_kraus({{identity(2)}, KrausSide::cp}).matrix == identity(4));
  CHECK(superop_from_kraus({{identity(3)}, KrausSide::cocp}).matrix == transpose_map(3).matrix);

  const SuperOperator damp = superop_from_kraus({{pauli::minus()}, KrausSide::cp});
  const ComplexMatrix excited = matrix_unit(2, 2, 1, 1);
  CHECK(decdyn::apply(damp, excited) == matrix_unit(2, 2, 0, 0));

  Rng rng(6);
  const ComplexMatrix w = gaussian_matrix(2, 2, rng);
  const ComplexMatrix x = gaussian_matrix(2, 2, rng);
  const SuperOperator co = superop_from_kraus({{w}, KrausSide::cocp});
  CHECK((decdyn::apply(co, x) - w * x.transpose() * w.adjoint()).norm() <= 1e-13);

  CHECK_THROWS_AS(superop_from_kraus({{identity(2), identity(3)}, KrausSide::cp}), DimensionError);
  CHECK_THROWS_AS(superop_from_kraus({{}, KrausSide::cp}), DimensionError);
}

TEST_CASE("kraus_from_choi", "[qmaps]") {
  const KrausFamily id = kraus_from_choi(choi_of(SuperOperator::identity(2)));
  REQUIRE(id.operators.size() == 1);
  CHECK((id.operators[0] - identity(2)).norm() <= 1e-12);

  SECTION("bit-flip mixture has the two expected Kraus operators") {
    const SuperOperator half = 0.5 * (SuperOperator::identity(2) +
                                      superop_from_kraus({{pauli::x()}, KrausSide::cp}));
    const KrausFamily fam = kraus_from_choi(choi_of(half));
    REQUIRE(fam.operators.size() == 2);
    // Each operator is a unit-modulus multiple of 1/sqrt2 or sigma_x/sqrt2.
    int saw_identity = 0, saw_flip = 0;
    for (const ComplexMatrix& k : fam.operators) {
      const double overlap_1 = std::abs((identity(2).adjoint() * k).trace()) / std::sqrt(2.0);
      const double overlap_x = std::abs((pauli::x().adjoint() * k).trace()) / std::sqrt(2.0);
      if (std::abs(overlap_1 - 1.0) < 1e-12 && overlap_x < 1e-12) ++saw_identity;
      if (std::abs(overlap_x - 1.0) < 1e-12 && overlap_1 < 1e-12) ++saw_flip;
    }
    CHECK(saw_identity == 1);
    CHECK(saw_flip == 1);
  }

  CHECK_THROWS_AS(kraus_from_choi(choi_of(transpose_map(2))), NotCP);

  SECTION("round trip for random CP maps") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
      const SuperOperator s = random_cp(d, 1 + static_cast<std::size_t>(trial % 4), rng);
      const KrausFamily fam = kraus_from_choi(choi_of(s));
      CHECK(fam.operators.size() <= d * d);
      CHECK((superop_from_kraus(fam).matrix - s.matrix).norm() <= 1e-9);
    }
  }

  SECTION("deterministic phase convention") {
    Rng rng(8);
    const SuperOperator s = random_cp(2, 2, rng);
    const KrausFamily fam = kraus_from_choi(choi_of(s));
    for (const ComplexMatrix& k : fam.operators) {
      // first nonzero component in (column i, row o) order is real positive
      for (Eigen::Index idx = 0; idx < k.size(); ++idx) {
        const Complex z = k(idx % k.rows(), idx / k.rows());
        if (std::abs(z) > 1e-10) {
          CHECK(z.real() > 0.0);
          CHECK(std::abs(z.imag()) <= 1e-12);
          break;
        }
      }
    }
  }
}

TEST_CASE("Hermiticity preservation and defects", "[qmaps]") {
  Rng rng(9);
  const SuperOperator cp = random_cp(3, 2, rng);
  CHECK(hermiticity_defect(cp) <= 1e-15);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian(3, rng);
    const ComplexMatrix out = decdyn::apply(cp, h);
    CHECK((out - out.adjoint()).norm() <= 1e-10);
  }
  const SuperOperator generic(2, gaussian_matrix(4, 4, rng));
  CHECK(hermiticity_defect(generic) > 1e-3);
  CHECK(unital_defect(SuperOperator::identity(2)) == 0.0);
  CHECK(trace_preservation_defect(transpose_map(3)) == 0.0);
}

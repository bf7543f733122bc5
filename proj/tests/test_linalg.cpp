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
#include <numbers>

#include "decdyn/linalg.hpp"
#include "decdyn/random.hpp"
#include "test_support.hpp"

using namespace decdyn;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

}  // namespace

TEST_CASE("kron follows the standard block layout", "[linalg]") {
  CHECK(kron(identity(2), identity(2)).isApprox(identity(4)));

  const ComplexMatrix k = kron(matrix_unit(2, 2, 0, 0), matrix_unit(2, 2, 1, 1));
  REQUIRE(k.rows() == 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(k(i, j) == Complex(i == 1 && j == 1 ? 1.0 : 0.0));

  const ComplexMatrix xx = kron(pauli::x(), pauli::x());
  CHECK((xx * xx - identity(4)).norm() == 0.0);

  Rng rng(3);
  const ComplexMatrix a = gaussian_matrix(2, 3, rng);
  const ComplexMatrix b = gaussian_matrix(3, 2, rng);
  const ComplexMatrix ab = kron(a, b);
  CHECK(ab.rows() == 6);
  CHECK(ab.cols() == 6);
  CHECK(std::abs(ab(1 * 3 + 2, 2 * 2 + 1) - a(1, 2) * b(2, 1)) < 1e-15);
}

TEST_CASE("row-stacking vectorization", "[linalg]") {
  const ComplexVector v = vec(matrix_unit(2, 2, 0, 1));
  CHECK(v == (ComplexVector(4) << 0, 1, 0, 0).finished());

  Rng rng(11);
  const ComplexMatrix x = gaussian_matrix(3, 3, rng);
  CHECK(unvec(vec(x), 3, 3) == x);
  const ComplexMatrix r = gaussian_matrix(2, 5, rng);
  CHECK(unvec(vec(r), 2, 5) == r);

  CHECK_THROWS_AS(unvec(v, 3, 2), DimensionError);

  SECTION("kron(A, B^T) vec(X) = vec(A X B)") {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
      const ComplexMatrix a = gaussian_matrix(d, d, rng);
      const ComplexMatrix b = gaussian_matrix(d, d, rng);
      const ComplexMatrix xm = gaussian_matrix(d, d, rng);
      const ComplexVector lhs = kron(a, b.transpose()) * vec(xm);
      const ComplexVector rhs = vec(a * xm * b);
      CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("herm_eig on closed-form spectra", "[linalg]") {
  const EigenDecomposition e1 = herm_eig(diag({3, 1, 2}));
  CHECK_THAT(e1.eigenvalues(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(e1.eigenvalues(1), WithinAbs(2.0, 1e-14));
  CHECK_THAT(e1.eigenvalues(2), WithinAbs(3.0, 1e-14));

  const EigenDecomposition e2 = herm_eig(pauli::x());
  CHECK_THAT(e2.eigenvalues(0), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(e2.eigenvalues(1), WithinAbs(1.0, 1e-14));

  const EigenDecomposition e3 = herm_eig(testing::swap_operator(2));
  const double expected[] = {-1, 1, 1, 1};
  for (int i = 0; i < 4; ++i) CHECK_THAT(e3.eigenvalues(i), WithinAbs(expected[i], 1e-14));

  CHECK_THROWS_AS(herm_eig(pauli::minus()), NotHermitian);
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("herm_eig reconstruction and orthonormality", "[linalg][property]") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 9);
    const ComplexMatrix a = random_hermitian(d, rng, 3.0);
    const EigenDecomposition e = herm_eig(a);
    const ComplexMatrix& u = e.eigenvectors;
    const ComplexMatrix rebuilt = u * e.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint();
    CHECK((a - rebuilt).norm() <= 1e-10 * std::max(1.0, a.norm()));
    CHECK((u.adjoint() * u - identity(d)).norm() <= 1e-10);
    for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i)
      CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
  }
}

TEST_CASE("expm", "[linalg]") {
  CHECK(expm(ComplexMatrix::Zero(3, 3)).isApprox(identity(3)));

  const ComplexMatrix e = expm(diag({1, 2}));
  CHECK(std::abs(e(0, 0) - std::exp(1.0)) <= 1e-13);
  CHECK(std::abs(e(1, 1) - std::exp(2.0)) <= 1e-13);
  CHECK(std::abs(e(0, 1)) <= 1e-13);

  const ComplexMatrix nil = matrix_unit(2, 2, 0, 1);
  for (double t : {0.5, 3.0, -7.25}) {
    CHECK((expm(t * nil) - (identity(2) + t * nil)).norm() <= 1e-14);
  }

  SECTION("agrees with an independent Taylor evaluation") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix a = gaussian_matrix(4, 4, rng, 0.6);
      CHECK((expm(a) - testing::taylor_expm(a)).norm() <= 1e-12 * expm(a).norm());
    }
  }

  SECTION("semigroup law") {
    Rng rng(19);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      ComplexMatrix a = gaussian_matrix(3, 3, rng);
      a *= 2.0 * unif(rng) / norm(a, NormKind::spectral);
      const double s = unif(rng);
      const double t = unif(rng);
      CHECK((expm((s + t) * a) - expm(s * a) * expm(t * a)).norm() <= 1e-9);
    }
  }
}

TEST_CASE("partial_transpose", "[linalg]") {
  CHECK(partial_transpose(identity(4), 2, 2) == identity(4));
  CHECK(partial_transpose(testing::max_entangled(2), 2, 2) == testing::swap_operator(2));
  CHECK_THROWS_AS(partial_transpose(identity(4), 2, 3), DimensionError);

  Rng rng(23);
  SECTION("matches explicit index relabeling and is an involution") {
    const ComplexMatrix c = gaussian_matrix(9, 9, rng);
    CHECK(partial_transpose(c, 3, 3) == testing::oracle_partial_transpose(c, 3, 3));
    CHECK(partial_transpose(partial_transpose(c, 3, 3), 3, 3) == c);
    const ComplexMatrix r = gaussian_matrix(6, 6, rng);
    CHECK(partial_transpose(r, 2, 3) == testing::oracle_partial_transpose(r, 2, 3));
  }
  SECTION("first-factor transpose is the full transpose of the second-factor one") {
    const ComplexMatrix c = gaussian_matrix(6, 6, rng);
    CHECK(partial_transpose(c, 2, 3, TensorFactor::first).transpose() == partial_transpose(c, 2, 3));
  }
  SECTION("preserves Hermiticity, trace and Frobenius norm") {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix h = random_hermitian(9, rng);
      const ComplexMatrix g = partial_transpose(h, 3, 3);
      CHECK(relative_asymmetry(g) <= 1e-15);
      CHECK(std::abs(g.trace() - h.trace()) <= 1e-13);
      CHECK_THAT(g.norm(), WithinAbs(h.norm(), 1e-12));
    }
  }
}

TEST_CASE("psd_project", "[linalg]") {
  CHECK((psd_project(diag({2, -1})) - diag({2, 0})).norm() <= 1e-14);

  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix p = random_psd(4, 1 + static_cast<std::size_t>(trial % 4), rng);
    CHECK((psd_project(p) - p).norm() <= 1e-12 * p.norm());
    CHECK(psd_project(-p).norm() <= 1e-12 * p.norm());

    const ComplexMatrix h = random_hermitian(5, rng);
    const ComplexMatrix once = psd_project(h);
    CHECK(min_eigenvalue(once) >= -1e-12);
    CHECK((psd_project(once) - once).norm() <= 1e-12);
  }
}

TEST_CASE("norms", "[linalg]") {
  CHECK_THAT(norm(identity(3), NormKind::trace), WithinAbs(3.0, 1e-14));
  CHECK_THAT(norm(diag({3, -4}), NormKind::trace), WithinAbs(7.0, 1e-14));
  CHECK_THAT(norm(diag({3, -4}), NormKind::spectral), WithinAbs(4.0, 1e-14));
  CHECK_THAT(norm(matrix_unit(2, 2, 0, 1), NormKind::frobenius), WithinAbs(1.0, 1e-15));
}

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

#include "decdyn/catalog.hpp"
#include "decdyn/cones.hpp"
#include "test_support.hpp"

using namespace decdyn;
using Catch::Matchers::WithinAbs;

namespace {

ChoiMatrix choi_from_kraus(const std::vector<ComplexMatrix>& ks, KrausSide side) {
  return choi_of(superop_from_kraus({ks, side}));
}

/// Min over product vectors x (x) y of <x y|C|x y> for C on C^2 (x) C^2.
/// The inner minimum over y is exact; x runs over a Bloch-sphere grid and
/// the best grid point is refined by a shrinking pattern search.
double product_minimum(const ComplexMatrix& c) {
  auto value = [&](double theta, double phi) {
    ComplexVector x(2);
    x << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
    const ComplexMatrix lift = kron(x, identity(2));
    return testing::oracle_min_eig(lift.adjoint() * c * lift);
  };
  constexpr int kTheta = 60, kPhi = 120;
  double best = std::numeric_limits<double>::infinity(), bt = 0.0, bp = 0.0;
  for (int a = 0; a <= kTheta; ++a) {
    for (int b = 0; b < kPhi; ++b) {
      const double theta = std::numbers::pi * a / kTheta;
      const double phi = 2.0 * std::numbers::pi * b / kPhi;
      const double v = value(theta, phi);
      if (v < best) best = v, bt = theta, bp = phi;
    }
  }
  for (double step = std::numbers::pi / kTheta; step > 1e-9; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const auto& [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double v = value(bt + dt, bp + dp);
        if (v < best) best = v, bt += dt, bp += dp, moved = true;
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("is_cp", "[cones]") {
  const ConeVerdict id = is_cp(choi_of(SuperOperator::identity(2)));
  CHECK(id.member);
  CHECK_THAT(id.margin, WithinAbs(0.0, 1e-12));

  const ConeVerdict swap = is_cp(choi_of(transpose_map(2)));
  CHECK_FALSE(swap.member);
  CHECK_THAT(swap.margin, WithinAbs(-1.0, 1e-12));

  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix v = gaussian_matrix(3, 3, rng);
    CHECK(is_cp(choi_from_kraus({v}, KrausSide::cp)).member);
  }

  ComplexMatrix skew = identity(4);
  skew(0, 1) = 0.5;
  CHECK_THROWS_AS(is_cp(ChoiMatrix(2, 2, skew)), NotHermitian);
}

TEST_CASE("is_cocp", "[cones]") {
  CHECK(is_cocp(choi_of(transpose_map(2))).member);
  const ConeVerdict id = is_cocp(choi_of(SuperOperator::identity(2)));
  CHECK_FALSE(id.member);
  CHECK_THAT(id.margin, WithinAbs(-1.0, 1e-12));
  CHECK(is_cocp(choi_of(catalog::completely_depolarizing(3))).member);
}

TEST_CASE("is_ppt", "[cones]") {
  CHECK(is_ppt(ChoiMatrix(2, 2, identity(4) / 4.0)).member);
  CHECK_FALSE(is_ppt(ChoiMatrix(2, 2, testing::max_entangled(2))).member);

  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix p = random_psd(9, 9, rng);
    const ComplexMatrix sym = p + partial_transpose(p, 3, 3);  // Gamma-symmetric
    const ComplexMatrix shifted = sym - std::min(0.0, min_eigenvalue(sym)) * identity(9);
    CHECK(is_ppt(ChoiMatrix(3, 3, shifted)).member);
  }
}

TEST_CASE("project_ppt_dykstra", "[cones]") {
  SECTION("fixed point on PPT input") {
    const ChoiMatrix c(2, 2, identity(4) / 4.0);
    const DykstraResult r = project_ppt_dykstra(c);
    CHECK((r.projection - c.matrix).norm() <= 1e-14);
    CHECK(r.iterations <= 2);
  }
  SECTION("polar of a strict cone point goes to zero") {
    const DykstraResult r = project_ppt_dykstra(ChoiMatrix(2, 2, -identity(4)));
    CHECK(r.projection.norm() <= 1e-12);
  }
  SECTION("obtuseness certificate on 2|Omega><Omega|") {
    const ComplexMatrix c = testing::max_entangled(2);
    const DykstraResult r = project_ppt_dykstra(ChoiMatrix(2, 2, c));
    const ComplexMatrix& y = r.projection;
    CHECK(testing::oracle_min_eig(y) >= -1e-9);
    CHECK(testing::oracle_min_eig(testing::oracle_partial_transpose(y, 2, 2)) >= -1e-9);
    CHECK(std::abs(frobenius_pairing(c - y, y)) <= 1e-8);
    CHECK(y.norm() > 0.1);
  }
  SECTION("iteration cap surfaces as IterationCap") {
    DykstraConfig tight;
    tight.max_iterations = 1;
    tight.residual_tol = 1e-14;
    Rng rng(3);
    const ComplexMatrix h = random_hermitian(9, rng);
    CHECK_THROWS_AS(project_ppt_dykstra(ChoiMatrix(3, 3, h), tight), IterationCap);
  }
}

TEST_CASE("is_decomposable examples", "[cones]") {
  Rng rng(4);
  SECTION("PSD plus Gamma(PSD) is a member") {
    for (std::size_t d : {2u, 3u}) {
      const ComplexMatrix c1 = random_psd(d * d, 2, rng);
      const ComplexMatrix c2 = random_psd(d * d, 2, rng);
      const ConeVerdict v =
          is_decomposable(ChoiMatrix(d, d, c1 + partial_transpose(c2, d, d)));
      CHECK(v.member);
      CHECK(v.converged);
      CHECK_FALSE(v.witness.has_value());
    }
  }
  SECTION("transpose is a member") {
    CHECK(is_decomposable(choi_of(transpose_map(2))).member);
    CHECK(is_decomposable(choi_of(transpose_map(3))).member);
  }
  SECTION("Choi's map is not, with an independently verified witness") {
    const ChoiMatrix c = choi_of(catalog::choi_map());
    const ConeVerdict v = is_decomposable(c);
    REQUIRE(v.converged);
    CHECK_FALSE(v.member);
    CHECK_FALSE(v.marginal);
    REQUIRE(v.witness.has_value());
    const testing::WitnessCheck w = testing::check_witness(*v.witness, c.matrix, 3, 3);
    CHECK(w.min_w >= -1e-9);
    CHECK(w.min_w_gamma >= -1e-9);
    CHECK(w.pairing <= -1e-6);
    CHECK_THAT(w.pairing, WithinAbs(v.margin, 1e-8));
    CHECK_THAT(v.witness->norm(), WithinAbs(1.0, 1e-12));
  }
  SECTION("Choi's map is positive but neither CP nor coCP") {
    const SuperOperator phi = catalog::choi_map();
    CHECK(positivity_sample_test(phi, 200, 5).passed);
    CHECK_FALSE(is_cp(choi_of(phi)).member);
    CHECK_FALSE(is_cocp(choi_of(phi)).member);
    CHECK((unit_image(phi) - 2.0 * identity(3)).norm() <= 1e-15);
  }
}

TEST_CASE("Dec membership for random CP + coCP maps", "[cones][property]") {
  Rng rng(6);
  int members = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = trial % 2 == 0 ? 2 : 3;
    const SuperOperator phi =
        superop_from_kraus({random_kraus_list(d, 1 + trial % 3, rng, 1.0), KrausSide::cp}) +
        superop_from_kraus({random_kraus_list(d, 1 + trial % 2, rng, 1.0), KrausSide::cocp});
    const ConeVerdict v = is_decomposable(choi_of(phi));
    CHECK(v.converged);
    if (v.member) ++members;
  }
  CHECK(members == 50);
}

TEST_CASE("Moreau consistency", "[cones][property]") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    const ComplexMatrix c = random_hermitian(d * d, rng);
    const ComplexMatrix polar = -project_ppt_dykstra(ChoiMatrix(d, d, -c)).projection;
    const ComplexMatrix dec_part = c - polar;
    CHECK(std::abs(frobenius_pairing(dec_part, polar)) <= 1e-8 * c.squaredNorm());
    // Projection of c onto Dec: its PPT pairing with every PPT element is
    // nonnegative, in particular with -polar.
    CHECK(frobenius_pairing(dec_part, -polar) >= -1e-8 * c.squaredNorm());
  }
}

TEST_CASE("Witness validity on random Hermitian inputs", "[cones][property]") {
  Rng rng(8);
  const DykstraConfig cfg;
  int non_members = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    const ComplexMatrix c = random_hermitian(d * d, rng);
    const ConeVerdict v = is_decomposable(ChoiMatrix(d, d, c), cfg);
    REQUIRE(v.converged);
    if (v.member) continue;
    ++non_members;
    REQUIRE(v.witness.has_value());
    const testing::WitnessCheck w = testing::check_witness(*v.witness, c, d, d);
    CHECK(w.min_w >= -1e-9);
    CHECK(w.min_w_gamma >= -1e-9);
    CHECK(w.pairing < -cfg.residual_tol / 2.0);
  }
  CHECK(non_members > 0);
}

TEST_CASE("Positive maps on M_2 are decomposable", "[cones][property]") {
  // Block-positive Choi matrices sit on the boundary after shifting by the
  // product minimum; a small positive offset keeps them strictly inside.
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian(4, rng);
    const double shift = product_minimum(h) - 1e-3;
    const ComplexMatrix c = h - shift * identity(4);
    const SuperOperator s = superop_of(ChoiMatrix(2, 2, c));
    REQUIRE(positivity_sample_test(s, 200, 100 + trial).passed);
    const ConeVerdict v = is_decomposable(ChoiMatrix(2, 2, c));
    CHECK(v.converged);
    CHECK((v.member || v.marginal));
  }
}

TEST_CASE("split_decomposable", "[cones]") {
  SECTION("half identity plus half transpose") {
    const SuperOperator mix =
        0.5 * (SuperOperator::identity(2) + transpose_map(2));
    const ChoiMatrix c = choi_of(mix);
    const DecompositionSplit s = split_decomposable(c);
    CHECK(s.residual <= 1e-8);
    CHECK(testing::oracle_min_eig(s.cp_part.matrix) >= -1e-8);
    CHECK(testing::oracle_min_eig(testing::oracle_partial_transpose(s.cocp_part.matrix, 2, 2)) >=
          -1e-8);
    CHECK((s.cp_part.matrix + s.cocp_part.matrix - c.matrix).norm() <= 1e-8);
  }
  SECTION("CP input comes back with an empty coCP part") {
    Rng rng(10);
    const ChoiMatrix c = choi_from_kraus(random_kraus_list(3, 2, rng, 1.0), KrausSide::cp);
    const DecompositionSplit s = split_decomposable(c);
    CHECK(s.cocp_part.matrix.norm() <= 1e-8);
    CHECK((s.cp_part.matrix - c.matrix).norm() <= 1e-8);
  }
  SECTION("random decomposable inputs satisfy the split invariants") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix c1 = random_psd(4, 2, rng);
      const ComplexMatrix c2 = random_psd(4, 2, rng);
      const ChoiMatrix c(2, 2, c1 + partial_transpose(c2, 2, 2));
      try {
        const DecompositionSplit s = split_decomposable(c);
        CHECK(s.residual <= 1e-8);
        CHECK(testing::oracle_min_eig(s.cp_part.matrix) >= -1e-8);
        CHECK(testing::oracle_min_eig(
                  testing::oracle_partial_transpose(s.cocp_part.matrix, 2, 2)) >= -1e-8);
      } catch (const IterationCap& e) {
        // Slow geometry is allowed but must report a small residual.
        CHECK(e.best_residual() <= 1e-6);
      }
    }
  }
  SECTION("Choi's map has no split") {
    try {
      split_decomposable(choi_of(catalog::choi_map()));
      FAIL("expected IterationCap");
    } catch (const IterationCap& e) {
      CHECK(e.best_residual() > 0.1);
    }
  }
}

TEST_CASE("positivity_sample_test", "[cones]") {
  CHECK(positivity_sample_test(transpose_map(3), 50, 1).passed);
  CHECK(positivity_sample_test(sandwich(pauli::z(), pauli::z()), 50, 2).passed);

  // X -> X - Tr(X) 1
  const ComplexMatrix one_vec = vec(identity(2));
  const SuperOperator shifted(2, identity(4) - one_vec * one_vec.adjoint());
  const PositivityVerdict v = positivity_sample_test(shifted, 0, 3);
  CHECK_FALSE(v.passed);
  CHECK_THAT(v.min_eigenvalue, WithinAbs(-1.0, 1e-12));
  CHECK(v.samples == 2);
  CHECK(decdyn::apply(shifted, matrix_unit(2, 2, 0, 0)).isApprox(
      (ComplexMatrix(2, 2) << 0, 0, 0, -1).finished()));
}

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

// Standard-form generators with their sampled (complete) dissipation checks.
// Generator-level cone classification sits at the end of the file.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "decdyn/cones.hpp"
#include "decdyn/errors.hpp"
#include "decdyn/linalg.hpp"
#include "decdyn/qmaps.hpp"
#include "decdyn/random.hpp"

namespace decdyn {

/// Ingredients of the Heisenberg-picture generator
///   L(A) = i[H, A] + sum_n ( V_n^dag A V_n + W_n^dag A^T W_n
///                            - 1/2 {V_n^dag V_n + W_n^dag W_n, A} ).
struct DecomposableGeneratorSpec {
  ComplexMatrix H;
  std::vector<ComplexMatrix> V_list;
  std::vector<ComplexMatrix> W_list;

  std::size_t dim() const { return static_cast<std::size_t>(H.rows()); }

  void validate() const {
    require_square(H, "DecomposableGeneratorSpec.H");
    require_hermitian(H);
    for (const auto* list : {&V_list, &W_list}) {
      for (const ComplexMatrix& k : *list) {
        if (k.rows() != H.rows() || k.cols() != H.cols()) {
          throw DimensionError("DecomposableGeneratorSpec: Kraus operator shape differs from H");
        }
      }
    }
  }
};

/// L(a) = phi(a) + psi(a)^T + K a + a K^dag with phi, psi given by CP Kraus
/// families (X -> sum_k V_k X V_k^dag) and K arbitrary.
struct NonunitalGeneratorSpec {
  KrausFamily phi_kraus;
  KrausFamily psi_kraus;
  ComplexMatrix K;

  std::size_t dim() const { return static_cast<std::size_t>(K.rows()); }

  void validate() const {
    require_square(K, "NonunitalGeneratorSpec.K");
    for (const auto* family : {&phi_kraus, &psi_kraus}) {
      if (family->side != KrausSide::cp) {
        throw InvalidArgument("NonunitalGeneratorSpec: Kraus families must be cp-sided");
      }
      for (const ComplexMatrix& k : family->operators) {
        if (k.rows() != K.rows() || k.cols() != K.cols()) {
          throw DimensionError("NonunitalGeneratorSpec: Kraus operator shape differs from K");
        }
      }
    }
  }
};

enum class Picture { heisenberg, schrodinger };

/// Superoperator of a -> K a + a K^dag.
inline SuperOperator left_right_multiplication(const ComplexMatrix& k) {
  const auto d = static_cast<std::size_t>(k.rows());
  const ComplexMatrix one = identity(d);
  return {d, kron(k, one) + kron(one, k.conjugate())};
}

/// Superoperator of A -> i[H, A].
inline SuperOperator commutator_map(const ComplexMatrix& h) {
  const auto d = static_cast<std::size_t>(h.rows());
  const ComplexMatrix one = identity(d);
  return {d, kI * (kron(h, one) - kron(one, h.transpose()))};
}

inline SuperOperator build_standard_heisenberg(const DecomposableGeneratorSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix one = identity(d);
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  ComplexMatrix cp = ComplexMatrix::Zero(n * n, n * n);
  ComplexMatrix co = ComplexMatrix::Zero(n * n, n * n);
  for (const ComplexMatrix& v : spec.V_list) {
    cp += kron(v.adjoint(), v.transpose());
    g += v.adjoint() * v;
  }
  for (const ComplexMatrix& w : spec.W_list) {
    co += kron(w.adjoint(), w.transpose());
    g += w.adjoint() * w;
  }
  ComplexMatrix m = commutator_map(spec.H).matrix + cp + co * transpose_map(d).matrix -
                    0.5 * (kron(g, one) + kron(one, g.transpose()));
  return {d, std::move(m)};
}

/// Trace-annihilating dual of build_standard_heisenberg.
inline SuperOperator build_standard_schrodinger(const DecomposableGeneratorSpec& spec) {
  return dual(build_standard_heisenberg(spec));
}

inline SuperOperator build_nonunital(const NonunitalGeneratorSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dim();
  SuperOperator l = left_right_multiplication(spec.K);
  if (!spec.phi_kraus.operators.empty()) l = l + superop_from_kraus(spec.phi_kraus);
  if (!spec.psi_kraus.operators.empty()) {
    l = l + compose(transpose_map(d), superop_from_kraus(spec.psi_kraus));
  }
  return l;
}

/// D_T(x) = T(x^dag x) - T(x^dag) x - x^dag T(x).
inline ComplexMatrix dissipation_function(const SuperOperator& t, const ComplexMatrix& x) {
  if (!t.square()) throw DimensionError("dissipation_function: T must map M_d to itself");
  const ComplexMatrix xd = x.adjoint();
  return decdyn::apply(t, xd * x) - decdyn::apply(t, xd) * x - xd * decdyn::apply(t, x);
}

struct DissipationLevel {
  std::size_t level = 0;
  double worst_margin = 0.0;
  std::string worst_family;
};

/// Sampled (complete) dissipation report. A pass is a necessary condition
/// up to `max_level`; it does not certify the property for all levels.
struct DissipationReport {
  std::vector<DissipationLevel> levels;
  double worst_margin = 0.0;
  bool passed = false;
  std::size_t max_level = 0;
  std::size_t samples = 0;
};

namespace detail {

inline const char* sample_family_name(std::size_t k) {
  static constexpr const char* names[] = {"gaussian", "hermitian", "unitary", "rank1"};
  return names[k % 4];
}

inline ComplexMatrix sample_operator(std::size_t k, std::size_t d, Rng& rng) {
  switch (k % 4) {
    case 0:
      return gaussian_matrix(d, d, rng);
    case 1:
      return random_hermitian(d, rng);
    case 2:
      return random_unitary(d, rng);
    default: {
      const ComplexVector a = gaussian_vector(d, rng);
      const ComplexVector b = gaussian_vector(d, rng);
      return a * b.adjoint();
    }
  }
}

inline DissipationReport run_dissipation_check(const SuperOperator& t, std::size_t max_level,
                                               std::size_t samples, double tol,
                                               std::uint64_t seed, bool nonunital) {
  if (!t.square()) throw DimensionError("dissipation check: T must map M_d to itself");
  if (max_level == 0) throw InvalidArgument("dissipation check: max_level must be >= 1");
  DissipationReport report;
  report.max_level = max_level;
  report.samples = samples;
  report.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (std::size_t n = 1; n <= max_level; ++n) {
    const SuperOperator tn = extend(t, n);
    const std::size_t big = n * t.dim_in;
    const ComplexMatrix tn_unit = unit_image(tn);
    DissipationLevel level{n, std::numeric_limits<double>::infinity(), ""};
    auto probe = [&](const ComplexMatrix& x, const std::string& family) {
      ComplexMatrix dx = dissipation_function(tn, x);
      if (nonunital) dx += x.adjoint() * tn_unit * x;
      const double m = min_eigenvalue(hermitian_part(dx));
      if (m < level.worst_margin) {
        level.worst_margin = m;
        level.worst_family = family;
      }
    };
    probe(identity(big), "unit");
    for (std::size_t k = 0; k < samples; ++k) {
      probe(sample_operator(k, big, rng), sample_family_name(k));
    }
    report.worst_margin = std::min(report.worst_margin, level.worst_margin);
    report.levels.push_back(std::move(level));
  }
  report.passed = report.worst_margin >= -tol;
  return report;
}

}  // namespace detail

/// Minimum eigenvalue of D_{T_n}(X) over sampled X in M_{nd}, n <= max_level.
/// Every level probes X = 1 first, then cycles through Gaussian, Hermitian,
/// unitary and rank-one samples.
inline DissipationReport dissipation_check(const SuperOperator& t, std::size_t max_level,
                                           std::size_t samples, double tol,
                                           std::uint64_t seed) {
  return detail::run_dissipation_check(t, max_level, samples, tol, seed, false);
}

/// Same protocol for D_{T_n}(X) + X^dag T_n(1) X, the inequality required of
/// the CP-type part of a nonunital generator.
inline DissipationReport nonunital_dissipation_check(const SuperOperator& l1,
                                                     std::size_t max_level,
                                                     std::size_t samples, double tol,
                                                     std::uint64_t seed) {
  return detail::run_dissipation_check(l1, max_level, samples, tol, seed, true);
}

struct GeneratorCheckConfig {
  DykstraConfig dykstra;
  /// Tolerance for Hermiticity preservation, L(1) = 0 / trace annihilation
  /// and the ccp eigenvalue test.
  double tol = 1e-9;
  /// Reject generators with L(1) != 0 (Heisenberg) or Tr L(rho) != 0
  /// (Schrodinger). Nonunital generators switch this off.
  bool require_unit_condition = true;
};

struct GeneratorClassification {
  bool hermiticity_preserving = false;
  double hermiticity_defect = 0.0;
  /// Heisenberg: ||L(1)||_F. Schrodinger: ||L^*(1)||_F.
  double unit_defect = 0.0;
  bool annihilates_unit = false;
  bool trace_annihilating = false;
  bool ccp = false;
  double ccp_margin = 0.0;
  ConeVerdict cc_decomposable;
};

namespace detail {

/// Projector onto the normalized maximally entangled vector of C^d (x) C^d.
inline ComplexMatrix max_entangled_projector(std::size_t d) {
  const ComplexVector omega = vec(identity(d)) / std::sqrt(static_cast<double>(d));
  return omega * omega.adjoint();
}

/// Hermitian directions |k><Omega| + |Omega><k| and i|k><Omega| - i|Omega><k|
/// spanning the set T of the conditional decomposability test.
inline std::vector<ComplexMatrix> entangled_directions(std::size_t d) {
  const ComplexVector omega = vec(identity(d)) / std::sqrt(static_cast<double>(d));
  const auto n = static_cast<Eigen::Index>(d * d);
  std::vector<ComplexMatrix> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const ComplexMatrix ko = ComplexVector::Unit(n, k) * omega.adjoint();
    out.push_back(ko + ko.adjoint());
    out.push_back(kI * ko - kI * ko.adjoint());
  }
  return out;
}

}  // namespace detail

/// Conditional cone tests on a generator.
///
/// With P the projector onto the maximally entangled direction and C the
/// Choi matrix of the Heisenberg-picture generator:
///  - ccp: (1-P) C (1-P) >= 0 (GKSL structure);
///  - cc_decomposable: C lies in Dec + {|k><Omega| + |Omega><k|}, i.e. the
///    generator equals phi + K. + .K^dag with phi decomposable. The dual
///    cone is {W PPT, W Omega = 0}; Y, the projection of -(1-P)C(1-P) onto
///    it, vanishes iff the test passes and otherwise gives the witness.
inline GeneratorClassification classify_generator(const SuperOperator& l, Picture picture,
                                                  const GeneratorCheckConfig& cfg = {}) {
  if (!l.square()) throw DimensionError("classify_generator: generator must be square");
  const std::size_t d = l.dim_in;
  GeneratorClassification out;
  out.hermiticity_defect = hermiticity_defect(l);
  out.hermiticity_preserving = out.hermiticity_defect <= cfg.tol;
  if (!out.hermiticity_preserving) {
    throw PreconditionFailed("classify_generator: generator does not preserve Hermiticity (defect " +
                             std::to_string(out.hermiticity_defect) + ")");
  }
  const SuperOperator heis = picture == Picture::heisenberg ? l : dual(l);
  const double scale = std::max(1.0, l.matrix.norm());
  out.unit_defect = unit_image(heis).norm();
  const bool ok = out.unit_defect <= cfg.tol * scale;
  out.annihilates_unit = ok;
  out.trace_annihilating = ok;
  if (!ok && cfg.require_unit_condition) {
    throw PreconditionFailed(std::string("classify_generator: ") +
                             (picture == Picture::heisenberg ? "L(1) != 0" : "Tr L(rho) != 0") +
                             " (defect " + std::to_string(out.unit_defect) + ")");
  }

  const ChoiMatrix choi = choi_of(heis);
  const ComplexMatrix p = detail::max_entangled_projector(d);
  const ComplexMatrix q = identity(d * d) - p;
  const ComplexMatrix compressed = hermitian_part(q * choi.matrix * q);

  // Lift the Omega direction out of the spectrum so the margin is the
  // minimum over the complement.
  const double lift = compressed.norm() + 1.0;
  out.ccp_margin = min_eigenvalue(hermitian_part(compressed + lift * p));
  out.ccp = out.ccp_margin >= -cfg.tol;

  const double gamma_floor = 1.0 - 1.0 / static_cast<double>(d);
  const Projector compress = [q](const ComplexMatrix& a) { return ComplexMatrix(q * a * q); };
  try {
    const DykstraResult r =
        dykstra(-compressed,
                {detail::psd_projector(), detail::gamma_psd_projector(d, d), compress},
                cfg.dykstra, detail::member_certificate(compressed, cfg.dykstra));
    out.cc_decomposable =
        detail::dual_cone_verdict(compressed, r, cfg.dykstra, 0.0, d, d, q, gamma_floor);
    if (out.cc_decomposable.member || r.iterations < cfg.dykstra.max_iterations) return out;
  } catch (const IterationCap&) {
  }
  out.cc_decomposable = detail::barrier_dec_verdict(compressed, d, d, cfg.dykstra,
                                                    cfg.dykstra.max_iterations, 0.0, q,
                                                    gamma_floor, detail::entangled_directions(d));
  return out;
}

}  // namespace decdyn

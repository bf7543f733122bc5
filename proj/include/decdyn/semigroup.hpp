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

// Semigroups e^{tL}: evaluation, first-order Trotter products, the
// even/odd series of exp(t tau o psi), and classification scans over a
// time grid.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "decdyn/cones.hpp"
#include "decdyn/errors.hpp"
#include "decdyn/linalg.hpp"
#include "decdyn/qmaps.hpp"

namespace decdyn {

inline SuperOperator semigroup_at(const SuperOperator& l, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup_at: t must be non-negative");
  if (!l.square()) throw DimensionError("semigroup_at: generator must be square");
  return {l.dim_in, expm(t * l.matrix)};
}

struct TrotterResult {
  SuperOperator approx;
  /// ||approx - e^{t(L1+L2)}||_F
  double error = 0.0;
};

/// (e^{tL1/n} e^{tL2/n})^n compared with e^{t(L1+L2)}.
inline TrotterResult trotter(const SuperOperator& l1, const SuperOperator& l2, double t,
                             std::size_t n) {
  if (!(t >= 0.0)) throw InvalidArgument("trotter: t must be non-negative");
  if (n == 0) throw InvalidArgument("trotter: n must be at least 1");
  if (l1.dim_in != l2.dim_in || !l1.square() || !l2.square()) {
    throw DimensionError("trotter: generators must act on the same M_d");
  }
  const double h = t / static_cast<double>(n);
  const ComplexMatrix step = expm(h * l1.matrix) * expm(h * l2.matrix);
  ComplexMatrix product = identity(static_cast<std::size_t>(step.rows()));
  for (std::size_t k = 0; k < n; ++k) product = step * product;
  const ComplexMatrix exact = expm(t * (l1.matrix + l2.matrix));
  const double error = (product - exact).norm();
  return {SuperOperator(l1.dim_in, std::move(product)), error};
}

struct CoCPSeries {
  /// sum_n t^{2n}/(2n)! (psi' o psi)^n
  SuperOperator even_cp;
  /// tau o psi o sum_n t^{2n+1}/(2n+1)! (psi' o psi)^n
  SuperOperator odd_cocp;
  /// Tail bound on ||sum_{k > terms} (t A)^k / k!||_F, A = tau o psi.
  double truncation_bound = 0.0;
};

/// Splits the power series of exp(t tau o psi) into its even (CP) and odd
/// (tau-composed CP) parts, using psi' with Kraus operators conj(W_k) so that
/// tau o psi = psi' o tau. Orders 0..terms are summed.
inline CoCPSeries cocp_exponential_series(const KrausFamily& psi_kraus, double t,
                                          std::size_t terms) {
  if (terms == 0) throw InvalidArgument("cocp_exponential_series: terms must be >= 1");
  if (!(t >= 0.0)) throw InvalidArgument("cocp_exponential_series: t must be non-negative");
  if (psi_kraus.side != KrausSide::cp) {
    throw InvalidArgument("cocp_exponential_series: psi must be given by a cp-sided family");
  }
  const SuperOperator psi = superop_from_kraus(psi_kraus);
  if (!psi.square()) throw DimensionError("cocp_exponential_series: psi must be square");
  const std::size_t d = psi.dim_in;
  KrausFamily conj_family;
  for (const ComplexMatrix& w : psi_kraus.operators) conj_family.operators.push_back(w.conjugate());
  const SuperOperator psi_prime = superop_from_kraus(conj_family);
  const ComplexMatrix pair = psi_prime.matrix * psi.matrix;  // psi' o psi

  const auto n = static_cast<Eigen::Index>(d * d);
  ComplexMatrix even = ComplexMatrix::Zero(n, n);
  ComplexMatrix odd = ComplexMatrix::Zero(n, n);
  ComplexMatrix power = ComplexMatrix::Identity(n, n);  // (psi' o psi)^m
  double coeff = 1.0;                                    // t^k / k!
  for (std::size_t k = 0; k <= terms; ++k) {
    if (k > 0) coeff *= t / static_cast<double>(k);
    if (k % 2 == 0) {
      if (k > 0) power = pair * power;
      even += coeff * power;
    } else {
      odd += coeff * power;
    }
  }
  const ComplexMatrix tau_psi = transpose_map(d).matrix * psi.matrix;
  CoCPSeries out{SuperOperator(d, std::move(even)), SuperOperator(d, tau_psi * odd), 0.0};

  // Tail of the scalar exponential series at a = t ||tau o psi||_F.
  const double a = t * tau_psi.norm();
  double term = 1.0;
  for (std::size_t k = 1; k <= terms; ++k) term *= a / static_cast<double>(k);
  double tail = 0.0;
  for (std::size_t k = terms + 1; k < terms + 400; ++k) {
    term *= a / static_cast<double>(k);
    tail += term;
    if (term <= tail * 1e-17) break;
  }
  out.truncation_bound = tail;
  return out;
}

struct ScanConfig {
  DykstraConfig dykstra;
  double tol = 1e-9;
};

struct SemigroupPoint {
  double t = 0.0;
  double unital_defect = 0.0;
  /// Min eigenvalue of 1 - e^{tL}(1).
  double subunital_margin = 0.0;
  bool subunital = false;
  ConeVerdict cp;
  ConeVerdict cocp;
  ConeVerdict decomposable;
};

struct SemigroupScan {
  std::vector<double> times;
  std::vector<SemigroupPoint> points;
};

inline std::vector<double> default_scan_times() { return {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}; }

/// Classifies each e^{tL} of a Heisenberg-picture generator.
inline SemigroupScan scan_semigroup(const SuperOperator& l, const std::vector<double>& times,
                                    const ScanConfig& cfg = {}) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InvalidArgument("scan_semigroup: times must be non-negative and strictly ascending");
    }
  }
  SemigroupScan scan;
  scan.times = times;
  const ComplexMatrix one = identity(l.dim_in);
  for (double t : times) {
    const SuperOperator s = semigroup_at(l, t);
    SemigroupPoint p;
    p.t = t;
    const ComplexMatrix u = unit_image(s);
    p.unital_defect = (u - one).norm();
    p.subunital_margin = min_eigenvalue(hermitian_part(one - u));
    p.subunital = p.subunital_margin >= -cfg.tol;
    const ChoiMatrix c = choi_of(s);
    p.cp = is_cp(c, cfg.tol);
    p.cocp = is_cocp(c, cfg.tol);
    p.decomposable = is_decomposable(c, cfg.dykstra);
    scan.points.push_back(std::move(p));
  }
  return scan;
}

}  // namespace decdyn

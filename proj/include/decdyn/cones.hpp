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

// Cone hierarchy at the Choi level.
//
//   CP    : C >= 0
//   coCP  : C^G >= 0              (G = partial transpose on the second factor)
//   PPT   : C >= 0 and C^G >= 0   (dual cone of Dec)
//   Dec   : PSD + G(PSD)
//
// Dec membership is decided through Moreau's decomposition: Y, the nearest
// PPT point to -C, vanishes iff C lies in Dec. Otherwise W = Y / ||Y||_F is
// a PPT witness with Re Tr(W^dagger C) = -||Y||_F < 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decdyn/errors.hpp"
#include "decdyn/linalg.hpp"
#include "decdyn/qmaps.hpp"
#include "decdyn/random.hpp"

namespace decdyn {

struct DykstraConfig {
  std::size_t max_iterations = 20000;
  double residual_tol = 1e-8;
  double stall_tol = 1e-12;

  void validate() const {
    if (max_iterations == 0 || !(residual_tol > 0.0) || !(stall_tol > 0.0)) {
      throw InvalidArgument("DykstraConfig: all fields must be positive");
    }
  }
};

struct ConeVerdict {
  bool member = false;
  /// Min eigenvalue for the spectral cones; -||Y||_F for Dec.
  double margin = 0.0;
  std::size_t iterations = 0;
  std::optional<ComplexMatrix> witness;
  /// Dec only: non-member whose residual lies within [tol, 10 tol].
  bool marginal = false;
  /// False when the iterative solver hit its cap; the verdict is then
  /// inconclusive.
  bool converged = true;
  /// Relative asymmetry of the input before symmetrization.
  double asymmetry = 0.0;
  /// Dec only: "dykstra", or "barrier" when the iteration cap was hit and
  /// the verdict was settled by the interior-point fallback.
  std::string method = "dykstra";
};

struct DecompositionSplit {
  ChoiMatrix cp_part;
  ChoiMatrix cocp_part;
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct DykstraResult {
  ComplexMatrix projection;
  std::size_t iterations = 0;
  /// Frobenius change of the iterate over the last cycle.
  double residual = 0.0;
};

using Projector = std::function<ComplexMatrix(const ComplexMatrix&)>;
using StopRule = std::function<bool(const ComplexMatrix&)>;

/// Dykstra's alternating projections onto the intersection of closed convex
/// sets. Stops when a full cycle moves the iterate by at most
/// stall_tol * max(1, ||start||_F), or as soon as `stop` accepts the iterate
/// at the end of a cycle. Reaching max_iterations is accepted if the last
/// change is within residual_tol * max(1, ||start||_F).
inline DykstraResult dykstra(const ComplexMatrix& start,
                             const std::vector<Projector>& projectors,
                             const DykstraConfig& cfg, const StopRule& stop = {}) {
  cfg.validate();
  const double scale = std::max(1.0, start.norm());
  ComplexMatrix x = start;
  std::vector<ComplexMatrix> increments(projectors.size(),
                                        ComplexMatrix::Zero(start.rows(), start.cols()));
  double change = 0.0;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    const ComplexMatrix previous = x;
    for (std::size_t k = 0; k < projectors.size(); ++k) {
      const ComplexMatrix shifted = x + increments[k];
      ComplexMatrix y = projectors[k](shifted);
      increments[k] = shifted - y;
      x = std::move(y);
    }
    change = (x - previous).norm();
    if (change <= cfg.stall_tol * scale || (stop && stop(x))) return {std::move(x), it, change};
  }
  if (change <= cfg.residual_tol * scale) return {std::move(x), cfg.max_iterations, change};
  throw IterationCap("dykstra: no convergence", cfg.max_iterations, change);
}

namespace detail {

inline ComplexMatrix symmetrized(const ChoiMatrix& c, double& asymmetry) {
  require_square(c.matrix, "cone test");
  asymmetry = relative_asymmetry(c.matrix);
  if (asymmetry > kHermitianTol) throw NotHermitian(asymmetry);
  return hermitian_part(c.matrix);
}

inline Projector psd_projector() {
  return [](const ComplexMatrix& a) { return psd_project(hermitian_part(a)); };
}

inline Projector gamma_psd_projector(std::size_t d_in, std::size_t d_out) {
  return [d_in, d_out](const ComplexMatrix& a) {
    return partial_transpose(psd_project(partial_transpose(hermitian_part(a), d_in, d_out)),
                             d_in, d_out);
  };
}

/// Early exit for projections of -C onto a cone K whose polar is -(cone
/// tested for membership). The Dykstra invariant start = x + sum of
/// increments, with every increment in the polar of its set, writes
/// C = (cone element) - x. Hence ||x|| bounds dist(C, cone) from above at
/// every cycle and a small iterate certifies membership.
inline StopRule member_certificate(const ComplexMatrix& c, const DykstraConfig& cfg) {
  const double tol = cfg.residual_tol * std::max(1.0, c.norm());
  return [tol](const ComplexMatrix& x) { return x.norm() <= tol; };
}

/// Removes the residual infeasibility of an approximate PPT witness by
/// adding eps * lift, where lift is 1 (plain Dec) or 1 - P (conditional
/// test; its partial transpose is >= (1 - 1/d) 1). Returns a unit-norm
/// matrix that is PSD and Gamma-PSD up to rounding.
inline ComplexMatrix polish_witness(const ComplexMatrix& w, std::size_t d_in, std::size_t d_out,
                                    const ComplexMatrix& lift, double gamma_floor) {
  ComplexMatrix out = hermitian_part(w);
  for (int pass = 0; pass < 2; ++pass) {
    const double need = std::max({0.0, -min_eigenvalue(out),
                                  -min_eigenvalue(partial_transpose(out, d_in, d_out)) /
                                      gamma_floor});
    if (need == 0.0) break;
    out += need * lift;
  }
  return out / out.norm();
}

/// Turns the projection Y of -C onto a dual cone into a Dec-style verdict.
/// A witness whose pairing with C is no longer negative after polishing is
/// not a certificate; such verdicts are marked marginal.
inline ConeVerdict dual_cone_verdict(const ComplexMatrix& c, const DykstraResult& r,
                                     const DykstraConfig& cfg, double asymmetry,
                                     std::size_t d_in, std::size_t d_out,
                                     const ComplexMatrix& lift, double gamma_floor = 1.0) {
  ConeVerdict v;
  v.asymmetry = asymmetry;
  v.iterations = r.iterations;
  const double scale = std::max(1.0, c.norm());
  const double y = r.projection.norm();
  const double tol = cfg.residual_tol * scale;
  v.member = y <= tol;
  v.margin = -y;
  if (!v.member) {
    const ComplexMatrix w = polish_witness(r.projection / y, d_in, d_out, lift, gamma_floor);
    v.marginal = y <= 10.0 * tol || !(frobenius_pairing(c, w) < 0.0);
    v.witness = w;
  }
  return v;
}

}  // namespace detail

inline ConeVerdict is_cp(const ChoiMatrix& c, double tol = 1e-9) {
  ConeVerdict v;
  const ComplexMatrix h = detail::symmetrized(c, v.asymmetry);
  v.margin = min_eigenvalue(h);
  v.member = v.margin >= -tol;
  return v;
}

inline ConeVerdict is_cocp(const ChoiMatrix& c, double tol = 1e-9) {
  ConeVerdict v;
  const ComplexMatrix h = detail::symmetrized(c, v.asymmetry);
  v.margin = min_eigenvalue(partial_transpose(h, c.dim_in, c.dim_out));
  v.member = v.margin >= -tol;
  return v;
}

inline ConeVerdict is_ppt(const ChoiMatrix& c, double tol = 1e-9) {
  ConeVerdict v;
  const ComplexMatrix h = detail::symmetrized(c, v.asymmetry);
  v.margin = std::min(min_eigenvalue(h),
                      min_eigenvalue(partial_transpose(h, c.dim_in, c.dim_out)));
  v.member = v.margin >= -tol;
  return v;
}

/// Frobenius-nearest point of PSD and G(PSD) to c.
inline DykstraResult project_ppt_dykstra(const ChoiMatrix& c, const DykstraConfig& cfg = {}) {
  double asymmetry = 0.0;
  const ComplexMatrix h = detail::symmetrized(c, asymmetry);
  return dykstra(h, {detail::psd_projector(), detail::gamma_psd_projector(c.dim_in, c.dim_out)},
                 cfg);
}

namespace detail {

/// Orthonormal basis of the real space of n x n Hermitian matrices.
inline std::vector<ComplexMatrix> hermitian_basis(std::size_t n) {
  std::vector<ComplexMatrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t a = 0; a < n; ++a) {
    basis.push_back(matrix_unit(n, n, a, a));
    for (std::size_t b = a + 1; b < n; ++b) {
      basis.push_back(r * (matrix_unit(n, n, a, b) + matrix_unit(n, n, b, a)));
      basis.push_back(r * kI * (matrix_unit(n, n, a, b) - matrix_unit(n, n, b, a)));
    }
  }
  return basis;
}

struct BarrierResult {
  /// Largest t found with C = A + G(B), A >= t 1, B >= t 1 (C normalized).
  double t = 0.0;
  /// mu S1^{-1}: PSD, with partial transpose close to mu S2^{-1} >= 0.
  ComplexMatrix dual;
  std::size_t newton_steps = 0;
  bool converged = false;
};

/// Log-barrier path following for
///   max t  s.t.  S1 = C - G(B) - sum_j k_j T_j - t 1 >= 0,  S2 = B - t 1 >= 0
/// over Hermitian B and real k, where T_j are optional extra Hermitian
/// directions (empty for plain Dec). Any t > 0 is an exact split of C; the
/// optimum is within 2n mu of the final iterate. Used when Dykstra stalls
/// on the boundary of the cone, where its convergence is sublinear.
inline BarrierResult dec_barrier(const ComplexMatrix& c, std::size_t d_in, std::size_t d_out,
                                 const std::vector<ComplexMatrix>& extra = {},
                                 double gap_tol = 1e-10, std::size_t max_newton = 1000) {
  const auto n = static_cast<std::size_t>(c.rows());
  const ComplexMatrix one = identity(n);
  const std::vector<ComplexMatrix> basis = hermitian_basis(n);
  const std::size_t nb = basis.size();
  const std::size_t m = nb + extra.size() + 1;  // coefficients of B, k, then t
  std::vector<ComplexMatrix> f, g;              // dS1/dy_i, dS2/dy_i
  for (const ComplexMatrix& e : basis) {
    f.push_back(-partial_transpose(e, d_in, d_out));
    g.push_back(e);
  }
  for (const ComplexMatrix& e : extra) {
    f.push_back(-e);
    g.push_back(ComplexMatrix::Zero(c.rows(), c.cols()));
  }
  f.push_back(-one);
  g.push_back(-one);

  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t a = 0, k = 0; a < n; ++a) {  // B = 1
    y(static_cast<Eigen::Index>(k)) = 1.0;
    k += 2 * (n - a) - 1;
  }
  y(static_cast<Eigen::Index>(m - 1)) = min_eigenvalue(c) - 2.0;

  auto slacks = [&](const Eigen::VectorXd& v, ComplexMatrix& s1, ComplexMatrix& s2) {
    ComplexMatrix b = ComplexMatrix::Zero(c.rows(), c.cols());
    for (std::size_t i = 0; i < nb; ++i) b += v(static_cast<Eigen::Index>(i)) * basis[i];
    ComplexMatrix shift = ComplexMatrix::Zero(c.rows(), c.cols());
    for (std::size_t j = 0; j < extra.size(); ++j) {
      shift += v(static_cast<Eigen::Index>(nb + j)) * extra[j];
    }
    const double t = v(static_cast<Eigen::Index>(m - 1));
    s1 = hermitian_part(c - partial_transpose(b, d_in, d_out) - shift - t * one);
    s2 = hermitian_part(b - t * one);
  };
  // Barrier objective -t/mu - log det S1 - log det S2, or +inf outside.
  auto objective = [&](const Eigen::VectorXd& v, double mu) {
    ComplexMatrix s1, s2;
    slacks(v, s1, s2);
    Eigen::LLT<ComplexMatrix> l1(s1), l2(s2);
    if (l1.info() != Eigen::Success || l2.info() != Eigen::Success) {
      return std::numeric_limits<double>::infinity();
    }
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < s1.rows(); ++k) {
      const double a = l1.matrixLLT()(k, k).real(), b = l2.matrixLLT()(k, k).real();
      if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::infinity();
      logdet += 2.0 * (std::log(a) + std::log(b));
    }
    return -v(static_cast<Eigen::Index>(m - 1)) / mu - logdet;
  };
  auto trace_product = [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.cwiseProduct(b.transpose()).sum().real();
  };

  BarrierResult out;
  double mu = 1.0;
  const double degree = 2.0 * static_cast<double>(n);
  while (out.newton_steps < max_newton) {
    // Damped Newton on the barrier problem for the current mu. Near the
    // boundary, rounding limits the attainable decrement, hence the cap on
    // inner steps.
    for (std::size_t inner = 0; inner < 50; ++inner) {
      if (++out.newton_steps > max_newton) return out;
      ComplexMatrix s1, s2;
      slacks(y, s1, s2);
      const ComplexMatrix inv1 = s1.llt().solve(one);
      const ComplexMatrix inv2 = s2.llt().solve(one);
      Eigen::VectorXd grad(static_cast<Eigen::Index>(m));
      Eigen::MatrixXd hess(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      std::vector<ComplexMatrix> p(m), q(m);
      for (std::size_t i = 0; i < m; ++i) {
        p[i] = inv1 * f[i] * inv1;
        q[i] = inv2 * g[i] * inv2;
        grad(static_cast<Eigen::Index>(i)) = -trace_product(inv1, f[i]) - trace_product(inv2, g[i]);
      }
      grad(static_cast<Eigen::Index>(m - 1)) -= 1.0 / mu;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
          const double h = trace_product(p[i], f[j]) + trace_product(q[i], g[j]);
          hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h;
          hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = h;
        }
      }
      const Eigen::VectorXd step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement)) return out;
      if (decrement <= 1e-12) break;
      const double f0 = objective(y, mu);
      double alpha = 1.0;
      while (alpha > 1e-12 && !(objective(y + alpha * step, mu) <= f0 - 0.25 * alpha * decrement)) {
        alpha *= 0.5;
      }
      if (alpha <= 1e-12) break;
      y += alpha * step;
      if (decrement <= 1e-10) break;
    }
    if (y(static_cast<Eigen::Index>(m - 1)) > 0.0 || degree * mu <= gap_tol) break;
    mu /= 8.0;
  }
  ComplexMatrix s1, s2;
  slacks(y, s1, s2);
  out.t = y(static_cast<Eigen::Index>(m - 1));
  out.dual = hermitian_part(mu * s1.llt().solve(one));
  out.converged = true;
  return out;
}

/// Settles a Dec verdict with dec_barrier after Dykstra hit its cap.
inline ConeVerdict barrier_dec_verdict(const ComplexMatrix& h, std::size_t d_in, std::size_t d_out,
                                       const DykstraConfig& cfg, std::size_t dykstra_iterations,
                                       double asymmetry, const ComplexMatrix& lift,
                                       double gamma_floor = 1.0,
                                       const std::vector<ComplexMatrix>& extra = {}) {
  ConeVerdict v;
  v.asymmetry = asymmetry;
  v.method = "barrier";
  const double norm_c = h.norm();
  const double tol = cfg.residual_tol * std::max(1.0, norm_c);
  if (norm_c == 0.0) {
    v.member = true;
    v.iterations = dykstra_iterations;
    return v;
  }
  const BarrierResult r = dec_barrier(h / norm_c, d_in, d_out, extra);
  v.iterations = dykstra_iterations + r.newton_steps;
  if (!r.converged) {
    v.converged = false;
    return v;
  }
  // t >= 0 gives an exact split; otherwise C + 2|t| ||C|| 1 is decomposable,
  // so dist(C, Dec) <= 2 sqrt(n) |t| ||C||.
  const double upper = 2.0 * std::sqrt(static_cast<double>(h.rows())) *
                       std::max(0.0, -r.t) * norm_c;
  v.member = upper <= tol;
  if (v.member) {
    v.margin = -upper;
    return v;
  }
  const ComplexMatrix w = polish_witness(r.dual, d_in, d_out, lift, gamma_floor);
  v.margin = frobenius_pairing(h, w);
  v.marginal = !(-v.margin > 10.0 * tol);
  v.witness = w;
  return v;
}

}  // namespace detail

/// Dec membership with a PPT witness on failure. Dykstra runs first; if it
/// reaches its cap without a certificate (typical on the boundary of Dec)
/// an interior-point solve settles the verdict and the result is tagged
/// method = "barrier". converged = false only when both fail.
inline ConeVerdict is_decomposable(const ChoiMatrix& c, const DykstraConfig& cfg = {}) {
  double asymmetry = 0.0;
  const ComplexMatrix h = detail::symmetrized(c, asymmetry);
  try {
    const DykstraResult r =
        dykstra(-h, {detail::psd_projector(), detail::gamma_psd_projector(c.dim_in, c.dim_out)},
                cfg, detail::member_certificate(h, cfg));
    ConeVerdict v = detail::dual_cone_verdict(h, r, cfg, asymmetry, c.dim_in, c.dim_out,
                                              identity(c.dim_in * c.dim_out));
    // A small last-cycle change at the cap does not separate slow
    // convergence from a true non-member.
    if (v.member || r.iterations < cfg.max_iterations) return v;
  } catch (const IterationCap&) {
  }
  return detail::barrier_dec_verdict(h, c.dim_in, c.dim_out, cfg, cfg.max_iterations, asymmetry,
                                     identity(c.dim_in * c.dim_out));
}

/// Feasible split C = A + B with A >= 0 and B^G >= 0, by Dykstra in the
/// product space: affine set {A + B = C} against PSD x G(PSD). Starts from
/// (C, 0), so CP inputs come back with an empty coCP part.
inline DecompositionSplit split_decomposable(const ChoiMatrix& c, const DykstraConfig& cfg = {}) {
  cfg.validate();
  double asymmetry = 0.0;
  const ComplexMatrix h = detail::symmetrized(c, asymmetry);
  const auto proj_a = detail::psd_projector();
  const auto proj_b = detail::gamma_psd_projector(c.dim_in, c.dim_out);
  const ComplexMatrix zero = ComplexMatrix::Zero(h.rows(), h.cols());

  ComplexMatrix a = h;
  ComplexMatrix b = zero;
  ComplexMatrix pa = zero, pb = zero;  // affine-step increments
  ComplexMatrix qa = zero, qb = zero;  // cone-step increments
  double residual = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    // affine projection
    const ComplexMatrix sa = a + pa;
    const ComplexMatrix sb = b + pb;
    const ComplexMatrix delta = 0.5 * (h - sa - sb);
    const ComplexMatrix ya = sa + delta;
    const ComplexMatrix yb = sb + delta;
    pa = sa - ya;
    pb = sb - yb;
    // cone projection
    const ComplexMatrix ta = ya + qa;
    const ComplexMatrix tb = yb + qb;
    a = proj_a(ta);
    b = proj_b(tb);
    qa = ta - a;
    qb = tb - b;

    residual = (h - a - b).norm();
    if (residual <= cfg.residual_tol) {
      return {ChoiMatrix(c.dim_in, c.dim_out, a), ChoiMatrix(c.dim_in, c.dim_out, b), residual,
              it};
    }
    if (std::abs(previous - residual) <= cfg.stall_tol * std::max(1.0, h.norm())) {
      throw IterationCap("split_decomposable: stalled", it, residual);
    }
    previous = residual;
  }
  throw IterationCap("split_decomposable: no feasible split", cfg.max_iterations, residual);
}

struct PositivityVerdict {
  bool passed = false;
  double min_eigenvalue = 0.0;
  std::size_t samples = 0;
};

/// Sampled positivity: applies S to the computational basis projectors and
/// to `samples` random pure and full-rank states (trace one). A necessary
/// condition only; passing does not certify positivity.
inline PositivityVerdict positivity_sample_test(const SuperOperator& s, std::size_t samples,
                                                std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  PositivityVerdict v;
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto probe = [&](const ComplexMatrix& rho) {
    const ComplexMatrix out = decdyn::apply(s, rho);
    v.min_eigenvalue = std::min(v.min_eigenvalue, min_eigenvalue(hermitian_part(out)));
    ++v.samples;
  };
  for (std::size_t i = 0; i < s.dim_in; ++i) probe(matrix_unit(s.dim_in, s.dim_in, i, i));
  for (std::size_t k = 0; k < samples; ++k) {
    probe(random_density(s.dim_in, k % 2 == 0 ? 1 : s.dim_in, rng));
  }
  v.passed = v.min_eigenvalue >= -tol;
  return v;
}

}  // namespace decdyn

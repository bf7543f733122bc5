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

// Time-dependent master equations d Lambda_t / dt = L_t o Lambda_t with
// piecewise-constant Schrodinger-picture generators, propagators
// V_{t,s} = Lambda_t Lambda_s^{-1} and D-divisibility scans.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "decdyn/cones.hpp"
#include "decdyn/errors.hpp"
#include "decdyn/generators.hpp"
#include "decdyn/linalg.hpp"
#include "decdyn/qmaps.hpp"

namespace decdyn {

/// A segment's generator: either standard-form ingredients or a raw
/// Schrodinger-picture superoperator.
using SegmentGenerator = std::variant<DecomposableGeneratorSpec, SuperOperator>;

struct ScheduleSegment {
  double t_start = 0.0;
  SegmentGenerator generator;
};

/// Piecewise-constant generator: segment k is active on [t_k, t_{k+1}).
struct GeneratorSchedule {
  std::vector<ScheduleSegment> segments;
  double horizon = 0.0;

  void validate() const {
    if (segments.empty()) throw InvalidArgument("schedule: no segments");
    if (segments.front().t_start != 0.0) {
      throw InvalidArgument("schedule: first segment must start at t = 0");
    }
    for (std::size_t k = 1; k < segments.size(); ++k) {
      if (!(segments[k].t_start > segments[k - 1].t_start)) {
        throw InvalidArgument("schedule: segment start times must be strictly ascending");
      }
    }
    if (!(horizon > segments.back().t_start)) {
      throw InvalidArgument("schedule: horizon must exceed the last segment start");
    }
    const std::size_t d = dim();
    for (const ScheduleSegment& s : segments) {
      if (segment_dim(s) != d) throw DimensionError("schedule: segments act on different M_d");
    }
  }

  std::size_t dim() const { return segment_dim(segments.front()); }

  /// Schrodinger-picture generator of segment k.
  SuperOperator generator(std::size_t k) const {
    return std::visit(
        [](const auto& g) -> SuperOperator {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, DecomposableGeneratorSpec>) {
            return build_standard_schrodinger(g);
          } else {
            if (!g.square()) throw DimensionError("schedule: raw generator must be square");
            return g;
          }
        },
        segments.at(k).generator);
  }

  /// Index of the segment active at t. With from_left, a segment boundary
  /// belongs to the segment that ends there.
  std::size_t segment_at(double t, bool from_left = false) const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < segments.size(); ++i) {
      if (from_left ? segments[i].t_start < t : segments[i].t_start <= t) k = i;
    }
    return k;
  }

 private:
  static std::size_t segment_dim(const ScheduleSegment& s) {
    return std::visit(
        [](const auto& g) -> std::size_t {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, DecomposableGeneratorSpec>) {
            return g.dim();
          } else {
            return g.dim_in;
          }
        },
        s.generator);
  }
};

enum class IntegrationMethod { time_splitting, rk4 };

inline const char* to_string(IntegrationMethod m) {
  return m == IntegrationMethod::time_splitting ? "time_splitting" : "rk4";
}

struct DynamicalMapTrajectory {
  std::vector<double> grid;
  std::vector<SuperOperator> maps;  // Schrodinger picture, maps[0] = id
  std::vector<double> trace_defects;
  IntegrationMethod method = IntegrationMethod::time_splitting;
  double step = 0.0;

  /// Grid index of t (within 1e-9 of a step), or throws.
  std::size_t index_of(double t) const {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i] - t) <= 1e-9 * std::max(1.0, step)) return i;
    }
    throw InvalidArgument("trajectory: t = " + std::to_string(t) + " is not on the grid");
  }
};

/// Integrates the master equation on a uniform grid of `steps` intervals.
///  time_splitting: Lambda_{j+1} = exp(h L_{t_j}) Lambda_j
///  rk4:            classical Runge-Kutta on dLambda/dt = L_t Lambda; the
///                  last stage reads the generator from the left so steps
///                  ending on a segment boundary stay inside one segment.
inline DynamicalMapTrajectory integrate(const GeneratorSchedule& schedule, std::size_t steps,
                                        IntegrationMethod method) {
  schedule.validate();
  if (steps == 0) throw InvalidArgument("integrate: steps must be >= 1");
  const std::size_t d = schedule.dim();
  const double h = schedule.horizon / static_cast<double>(steps);

  std::vector<ComplexMatrix> generators;
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    generators.push_back(schedule.generator(k).matrix);
  }
  std::vector<ComplexMatrix> propagators;
  if (method == IntegrationMethod::time_splitting) {
    for (const ComplexMatrix& g : generators) propagators.push_back(expm(h * g));
  }

  DynamicalMapTrajectory traj;
  traj.method = method;
  traj.step = h;
  ComplexMatrix lambda = identity(d * d);
  auto record = [&](double t) {
    traj.grid.push_back(t);
    traj.maps.emplace_back(d, lambda);
    traj.trace_defects.push_back(trace_preservation_defect(traj.maps.back()));
  };
  record(0.0);
  for (std::size_t j = 0; j < steps; ++j) {
    const double t = static_cast<double>(j) * h;
    if (method == IntegrationMethod::time_splitting) {
      lambda = propagators[schedule.segment_at(t)] * lambda;
    } else {
      const ComplexMatrix& g0 = generators[schedule.segment_at(t)];
      const ComplexMatrix& gm = generators[schedule.segment_at(t + 0.5 * h)];
      const ComplexMatrix& g1 = generators[schedule.segment_at(t + h, true)];
      const ComplexMatrix k1 = g0 * lambda;
      const ComplexMatrix k2 = gm * (lambda + 0.5 * h * k1);
      const ComplexMatrix k3 = gm * (lambda + 0.5 * h * k2);
      const ComplexMatrix k4 = g1 * (lambda + h * k3);
      lambda += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    record(static_cast<double>(j + 1) * h);
  }
  return traj;
}

struct PropagatorResult {
  SuperOperator map;
  double condition_number = 0.0;
};

inline constexpr double kConditionCap = 1e10;

/// V_{t,s} = Lambda_t Lambda_s^{-1} for grid indices s <= t. No
/// pseudo-inverse fallback: an ill-conditioned Lambda_s raises
/// SingularIntermediateMap.
inline PropagatorResult propagator(const DynamicalMapTrajectory& traj, std::size_t t_index,
                                   std::size_t s_index, double condition_cap = kConditionCap) {
  if (t_index >= traj.maps.size() || s_index > t_index) {
    throw InvalidArgument("propagator: need grid indices s <= t within the trajectory");
  }
  const ComplexMatrix& ls = traj.maps[s_index].matrix;
  const ComplexMatrix& lt = traj.maps[t_index].matrix;
  Eigen::JacobiSVD<ComplexMatrix> svd(ls);
  const RealVector& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= condition_cap)) throw SingularIntermediateMap(cond);
  // V Lambda_s = Lambda_t  <=>  Lambda_s^T V^T = Lambda_t^T
  ComplexMatrix v = ls.transpose().fullPivLu().solve(lt.transpose()).transpose();
  return {SuperOperator(traj.maps[t_index].dim_in, std::move(v)), cond};
}

inline PropagatorResult propagator_at(const DynamicalMapTrajectory& traj, double t, double s,
                                      double condition_cap = kConditionCap) {
  return propagator(traj, traj.index_of(t), traj.index_of(s), condition_cap);
}

struct DivisibilityConfig {
  DykstraConfig dykstra;
  double tol = 1e-9;
  std::size_t positivity_samples = 32;
  std::uint64_t seed = 0;
  double condition_cap = kConditionCap;
};

struct PairVerdict {
  std::size_t s_index = 0;
  std::size_t t_index = 0;
  double s = 0.0;
  double t = 0.0;
  bool singular = false;
  double condition_number = 0.0;
  double trace_preserving_defect = 0.0;
  PositivityVerdict positivity;
  ConeVerdict cp;
  ConeVerdict cocp;
  ConeVerdict decomposable;
};

struct DivisibilityReport {
  std::vector<PairVerdict> pairs;
  std::size_t indecomposable = 0;  // decisive non-members
  std::size_t marginal = 0;
  std::size_t inconclusive = 0;
  std::size_t singular = 0;
  bool cp_divisible = true;
  bool d_divisible = true;
};

/// Pointwise decomposability of sampled propagators cannot by itself
/// establish smooth decomposability of the whole family.
inline constexpr const char* kDivisibilityCaveat =
    "decomposability is tested pair by pair on the grid; smooth decomposability "
    "in (s, t) is not certified";

/// All (s, t) grid pairs with s < t, subsampling the grid every `stride`
/// points (the final grid point is always kept).
inline std::vector<std::pair<std::size_t, std::size_t>> default_pair_grid(
    const DynamicalMapTrajectory& traj, std::size_t stride = 1) {
  if (stride == 0) throw InvalidArgument("default_pair_grid: stride must be >= 1");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < traj.grid.size(); i += stride) idx.push_back(i);
  if (idx.back() != traj.grid.size() - 1) idx.push_back(traj.grid.size() - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) pairs.emplace_back(idx[a], idx[b]);
  }
  return pairs;
}

/// Classifies V_{t,s} for every (s_index, t_index) pair. Singular
/// intermediate maps are recorded and the scan continues.
inline DivisibilityReport divisibility_scan(
    const DynamicalMapTrajectory& traj,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    const DivisibilityConfig& cfg = {}) {
  DivisibilityReport report;
  for (const auto& [si, ti] : pairs) {
    if (!(si < ti) || ti >= traj.grid.size()) {
      throw InvalidArgument("divisibility_scan: pairs must satisfy s < t within the grid");
    }
    PairVerdict v;
    v.s_index = si;
    v.t_index = ti;
    v.s = traj.grid[si];
    v.t = traj.grid[ti];
    try {
      const PropagatorResult pr = propagator(traj, ti, si, cfg.condition_cap);
      v.condition_number = pr.condition_number;
      v.trace_preserving_defect = trace_preservation_defect(pr.map);
      v.positivity = positivity_sample_test(pr.map, cfg.positivity_samples,
                                            cfg.seed + 7919 * si + ti, cfg.tol);
      const ChoiMatrix c = choi_of(pr.map);
      v.cp = is_cp(c, cfg.tol);
      v.cocp = is_cocp(c, cfg.tol);
      v.decomposable = is_decomposable(c, cfg.dykstra);
    } catch (const SingularIntermediateMap& e) {
      v.singular = true;
      v.condition_number = e.condition_number();
      ++report.singular;
      report.pairs.push_back(std::move(v));
      continue;
    }
    if (!v.cp.member) report.cp_divisible = false;
    if (!v.decomposable.converged) {
      ++report.inconclusive;
    } else if (!v.decomposable.member) {
      if (v.decomposable.marginal) {
        ++report.marginal;
      } else {
        ++report.indecomposable;
      }
    }
    report.pairs.push_back(std::move(v));
  }
  report.d_divisible = report.indecomposable == 0;
  return report;
}

struct DynmapGeneratorCheck {
  std::vector<GeneratorClassification> segments;
  /// Every segment generator passes the conditional decomposability test.
  bool d_divisible = true;
};

inline DynmapGeneratorCheck dynmap_generator_check(const GeneratorSchedule& schedule,
                                                   const GeneratorCheckConfig& cfg = {}) {
  schedule.validate();
  DynmapGeneratorCheck out;
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    out.segments.push_back(classify_generator(dual(schedule.generator(k)), Picture::heisenberg, cfg));
    if (!out.segments.back().cc_decomposable.member) out.d_divisible = false;
  }
  return out;
}

}  // namespace decdyn

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

// Command implementations behind the decdyn tool. Each command runs in
// process on a parsed scenario and returns its report and exit code, so the
// test suites drive exactly the code the executable runs.
//
// Exit codes: 0 affirmative, 1 negative with a certificate, 2 input error,
// 3 numeric non-convergence. Over several objects the most severe code wins,
// ranked 2 > 3 > 1 > 0.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "decdyn/decdyn.hpp"
#include "decdyn/io/report.hpp"
#include "decdyn/io/scenario.hpp"

namespace decdyn::io {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Format { human, machine };

struct Options {
  std::string command;
  std::string scenario;
  double tol = 1e-9;
  double residual_tol = 1e-8;
  std::optional<std::uint64_t> seed;
  std::size_t max_iter = 20000;
  Format format = Format::human;
  std::optional<std::string> object;
  bool timing = false;
  /// Sampled positivity and dissipation probes per check.
  std::size_t samples = 100;
  /// Highest tensor extension level for dissipation checks.
  std::size_t levels = 3;
  std::size_t steps = 20;
  std::string method = "time_splitting";
  std::size_t pair_stride = 1;
  /// Classify every Lambda_t (evolve) or every e^{tL} (check-generator).
  bool scan = false;
  bool dump_maps = false;
};

struct CommandResult {
  Report report;
  int exit_code = 0;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"classify-map", "decompose-map", "check-generator",
                                                 "evolve", "check-divisibility"};
  return names;
}

namespace detail {

inline int severity(int code) {
  switch (code) {
    case 0: return 0;
    case 1: return 1;
    case 3: return 2;
    default: return 3;
  }
}

inline int worst(int a, int b) { return severity(a) >= severity(b) ? a : b; }

inline const char* status_name(int code) {
  switch (code) {
    case 0: return "affirmative";
    case 1: return "negative";
    case 3: return "non_convergence";
    default: return "input_error";
  }
}

/// Exit code of a Dec-type verdict: 3 if the solver did not settle it.
inline int verdict_code(const ConeVerdict& v) {
  if (!v.converged) return 3;
  return v.member ? 0 : 1;
}

inline DykstraConfig dykstra_config(const Options& o) {
  DykstraConfig cfg;
  cfg.max_iterations = o.max_iter;
  cfg.residual_tol = o.residual_tol;
  return cfg;
}

inline Report options_to_json(const Options& o) {
  Report j;
  j["tol"] = o.tol;
  j["residual_tol"] = o.residual_tol;
  j["max_iter"] = o.max_iter;
  j["object"] = o.object ? Report(*o.object) : Report(nullptr);
  if (o.command == "classify-map" || o.command == "check-generator" ||
      o.command == "check-divisibility") {
    j["samples"] = o.samples;
  }
  if (o.command == "check-generator") j["levels"] = o.levels;
  if (o.command == "evolve" || o.command == "check-divisibility") {
    j["steps"] = o.steps;
    j["method"] = o.method;
  }
  if (o.command == "check-divisibility") j["pair_stride"] = o.pair_stride;
  if (o.command == "evolve" || o.command == "check-generator") j["scan"] = o.scan;
  if (o.command == "evolve") j["dump_maps"] = o.dump_maps;
  return j;
}

inline IntegrationMethod parse_method(const std::string& m) {
  if (m == "time_splitting") return IntegrationMethod::time_splitting;
  if (m == "rk4") return IntegrationMethod::rk4;
  throw InvalidArgument("unknown integration method '" + m + "' (time_splitting, rk4)");
}

using ObjectBody = std::function<int(const ScenarioObject&, Report&)>;

/// Runs `body` on one object, mapping library errors to exit codes.
inline Report run_object(const std::string& name, const ScenarioObject& obj,
                         const ObjectBody& body, int& code) {
  Report e;
  e["name"] = name;
  e["kind"] = obj.kind;
  if (!obj.description.empty()) e["description"] = obj.description;
  try {
    code = body(obj, e);
  } catch (const IterationCap& err) {
    code = 3;
    e["error"] = {{"type", "iteration_cap"},
                  {"message", err.what()},
                  {"iterations", err.iterations()},
                  {"best_residual", err.best_residual()}};
  } catch (const NoConvergence& err) {
    code = 3;
    e["error"] = {{"type", "no_convergence"}, {"message", err.what()}};
  } catch (const Error& err) {
    code = 2;
    e["error"] = {{"type", "input"}, {"message", err.what()}};
  }
  e["exit_code"] = code;
  e["status"] = status_name(code);
  return e;
}

inline Report cone_block(const ChoiMatrix& c, const Options& o) {
  Report j;
  j["cp"] = eigen_verdict_to_json(is_cp(c, o.tol));
  j["cocp"] = eigen_verdict_to_json(is_cocp(c, o.tol));
  j["ppt"] = eigen_verdict_to_json(is_ppt(c, o.tol));
  return j;
}

inline void require_hermiticity_preserving(const SuperOperator& s, double tol) {
  const double defect = hermiticity_defect(s);
  if (defect > tol) {
    throw PreconditionFailed("map does not preserve Hermiticity (defect " +
                             std::to_string(defect) + ")");
  }
}

inline int classify_map(const ScenarioObject& obj, Report& e, const Options& o) {
  const SuperOperator& s = std::get<MapObject>(obj.value).map;
  require_hermiticity_preserving(s, o.tol);
  e["dim_in"] = s.dim_in;
  e["dim_out"] = s.dim_out;
  e["trace_preservation_defect"] = trace_preservation_defect(s);
  e["unital_defect"] = unital_defect(s);
  e["positivity_sampled"] = positivity_to_json(positivity_sample_test(s, o.samples, *o.seed, o.tol));
  const ChoiMatrix c = choi_of(s);
  e.update(cone_block(c, o));
  const ConeVerdict dec = is_decomposable(c, dykstra_config(o));
  e["decomposable"] = dec_verdict_to_json(dec, c.matrix, c.dim_in, c.dim_out);
  return verdict_code(dec);
}

inline Report kraus_to_json(const KrausFamily& f) {
  Report ops = Report::array();
  for (const ComplexMatrix& k : f.operators) ops.push_back(matrix_to_json(k));
  return ops;
}

inline int decompose_map(const ScenarioObject& obj, Report& e, const Options& o) {
  const SuperOperator& s = std::get<MapObject>(obj.value).map;
  require_hermiticity_preserving(s, o.tol);
  e["dim_in"] = s.dim_in;
  e["dim_out"] = s.dim_out;
  const ChoiMatrix c = choi_of(s);
  const DykstraConfig cfg = dykstra_config(o);
  const ConeVerdict dec = is_decomposable(c, cfg);
  e["decomposable"] = dec_verdict_to_json(dec, c.matrix, c.dim_in, c.dim_out);
  Report split;
  try {
    const DecompositionSplit sp = split_decomposable(c, cfg);
    split["found"] = true;
    split["residual"] = sp.residual;
    split["iterations"] = sp.iterations;
    split["cp_part"] = matrix_to_json(sp.cp_part.matrix);
    split["cocp_part"] = matrix_to_json(sp.cocp_part.matrix);
    // The cp Kraus family of G(B) conjugated is a cocp family for B.
    const KrausFamily cp = kraus_from_choi(sp.cp_part, o.tol);
    KrausFamily cocp =
        kraus_from_choi(ChoiMatrix(c.dim_in, c.dim_out,
                                   partial_transpose(sp.cocp_part.matrix, c.dim_in, c.dim_out)),
                        o.tol);
    for (ComplexMatrix& k : cocp.operators) k = k.conjugate().eval();
    cocp.side = KrausSide::cocp;
    SuperOperator rebuilt(s.dim_in, s.dim_out,
                          ComplexMatrix::Zero(s.matrix.rows(), s.matrix.cols()));
    if (!cp.operators.empty()) rebuilt = rebuilt + superop_from_kraus(cp);
    if (!cocp.operators.empty()) rebuilt = rebuilt + superop_from_kraus(cocp);
    split["cp_kraus"] = kraus_to_json(cp);
    split["cocp_kraus"] = kraus_to_json(cocp);
    split["kraus_reconstruction_error"] = (rebuilt.matrix - s.matrix).norm();
    e["split"] = std::move(split);
    return dec.converged ? 0 : 3;
  } catch (const IterationCap& err) {
    split["found"] = false;
    split["best_residual"] = err.best_residual();
    split["iterations"] = err.iterations();
    e["split"] = std::move(split);
  }
  if (!dec.converged || dec.member) return 3;
  return 1;
}

inline GeneratorCheckConfig generator_config(const Options& o) {
  GeneratorCheckConfig cfg;
  cfg.dykstra = dykstra_config(o);
  cfg.tol = o.tol;
  return cfg;
}

inline const char* picture_name(Picture p) {
  return p == Picture::heisenberg ? "heisenberg" : "schrodinger";
}

inline Report classification_to_json(const GeneratorClassification& cls,
                                     const SuperOperator& heisenberg) {
  Report j;
  j["hermiticity_defect"] = cls.hermiticity_defect;
  j["unit_defect"] = cls.unit_defect;
  j["annihilates_unit"] = cls.annihilates_unit;
  j["trace_annihilating"] = cls.trace_annihilating;
  j["conditionally_cp"] = {{"member", cls.ccp}, {"margin", cls.ccp_margin}};
  const ChoiMatrix c = choi_of(heisenberg);
  j["conditionally_decomposable"] =
      dec_verdict_to_json(cls.cc_decomposable, c.matrix, c.dim_in, c.dim_out);
  return j;
}

inline Report scan_point_to_json(const SemigroupPoint& p, const SuperOperator& map) {
  const ChoiMatrix c = choi_of(map);
  Report j;
  j["t"] = p.t;
  j["unital_defect"] = p.unital_defect;
  j["subunital"] = {{"member", p.subunital}, {"margin", p.subunital_margin}};
  j["cp"] = eigen_verdict_to_json(p.cp);
  j["cocp"] = eigen_verdict_to_json(p.cocp);
  j["decomposable"] = dec_verdict_to_json(p.decomposable, c.matrix, c.dim_in, c.dim_out);
  return j;
}

inline int check_generator(const ScenarioObject& obj, Report& e, const Options& o) {
  const GeneratorObject& g = std::get<GeneratorObject>(obj.value);
  const SuperOperator heis = g.heisenberg();
  e["picture"] = picture_name(g.picture);
  e["form"] = g.form;
  e["dim"] = g.generator.dim_in;
  GeneratorCheckConfig gcfg = generator_config(o);
  gcfg.require_unit_condition = !g.nonunital;
  const GeneratorClassification cls = classify_generator(g.generator, g.picture, gcfg);
  e["classification"] = classification_to_json(cls, heis);
  const DissipationReport dis =
      g.nonunital ? nonunital_dissipation_check(g.dissipation_target, o.levels, o.samples, o.tol, *o.seed)
                  : dissipation_check(g.dissipation_target, o.levels, o.samples, o.tol, *o.seed);
  Report dj = dissipation_to_json(dis);
  dj["inequality"] = g.nonunital ? "D_T(X) + X^dag T(1) X >= 0" : "D_T(X) >= 0";
  // Structured forms expose the CP-type part L1 of L = L1 + L2; the others
  // only allow testing the whole generator, which is informational.
  const bool split_known = g.form == "spec" || g.form == "nonunital";
  dj["target"] = split_known ? "cp_type_part" : "whole_generator";
  dj["note"] = "sampled necessary test, certified only up to max_level";
  e["dissipation"] = std::move(dj);

  int code = verdict_code(cls.cc_decomposable);
  if (code == 0 && split_known && !dis.passed) code = 1;
  if (o.scan) {
    ScanConfig scfg;
    scfg.dykstra = dykstra_config(o);
    scfg.tol = o.tol;
    const std::vector<double> times = default_scan_times();
    const SemigroupScan scan = scan_semigroup(heis, times, scfg);
    Report points = Report::array();
    for (const SemigroupPoint& p : scan.points) {
      points.push_back(scan_point_to_json(p, semigroup_at(heis, p.t)));
      code = worst(code, verdict_code(p.decomposable));
    }
    e["semigroup_scan"] = std::move(points);
  }
  return code;
}

inline Report segments_to_json(const GeneratorSchedule& s) {
  Report segs = Report::array();
  for (const ScheduleSegment& seg : s.segments) {
    const bool spec = std::holds_alternative<DecomposableGeneratorSpec>(seg.generator);
    segs.push_back({{"t_start", seg.t_start}, {"form", spec ? "spec" : "superop"}});
  }
  return segs;
}

inline int evolve(const ScenarioObject& obj, Report& e, const Options& o) {
  const GeneratorSchedule& s = std::get<GeneratorSchedule>(obj.value);
  const DynamicalMapTrajectory traj = integrate(s, o.steps, parse_method(o.method));
  e["dim"] = s.dim();
  e["horizon"] = s.horizon;
  e["segments"] = segments_to_json(s);
  e["step"] = traj.step;
  double max_defect = 0.0;
  for (double d : traj.trace_defects) max_defect = std::max(max_defect, d);
  e["max_trace_preservation_defect"] = max_defect;
  int code = 0;
  Report points = Report::array();
  for (std::size_t i = 0; i < traj.grid.size(); ++i) {
    Report p;
    p["t"] = traj.grid[i];
    p["trace_preservation_defect"] = traj.trace_defects[i];
    if (o.scan) {
      const ChoiMatrix c = choi_of(traj.maps[i]);
      p.update(cone_block(c, o));
      const ConeVerdict dec = is_decomposable(c, dykstra_config(o));
      p["decomposable"] = dec_verdict_to_json(dec, c.matrix, c.dim_in, c.dim_out);
      code = worst(code, verdict_code(dec));
    }
    if (o.dump_maps) p["superop"] = matrix_to_json(traj.maps[i].matrix);
    points.push_back(std::move(p));
  }
  e["trajectory"] = std::move(points);
  return code;
}

inline Report pair_to_json(const PairVerdict& v, const DynamicalMapTrajectory& traj) {
  Report j;
  j["s"] = v.s;
  j["t"] = v.t;
  j["s_index"] = v.s_index;
  j["t_index"] = v.t_index;
  j["singular"] = v.singular;
  j["condition_number"] = v.condition_number;
  if (v.singular) {
    j["warning"] = "intermediate map is singular; pair skipped";
    return j;
  }
  j["trace_preservation_defect"] = v.trace_preserving_defect;
  j["positivity_sampled"] = positivity_to_json(v.positivity);
  j["cp"] = eigen_verdict_to_json(v.cp);
  j["cocp"] = eigen_verdict_to_json(v.cocp);
  const std::size_t d = traj.maps[v.t_index].dim_in;
  const ComplexMatrix c =
      v.decomposable.witness
          ? choi_of(propagator(traj, v.t_index, v.s_index, kConditionCap).map).matrix
          : ComplexMatrix();
  j["decomposable"] = dec_verdict_to_json(v.decomposable, c, d, d);
  return j;
}

inline int check_divisibility(const ScenarioObject& obj, Report& e, const Options& o) {
  const GeneratorSchedule& s = std::get<GeneratorSchedule>(obj.value);
  const DynamicalMapTrajectory traj = integrate(s, o.steps, parse_method(o.method));
  e["dim"] = s.dim();
  e["horizon"] = s.horizon;
  e["segments"] = segments_to_json(s);
  e["step"] = traj.step;

  DivisibilityConfig cfg;
  cfg.dykstra = dykstra_config(o);
  cfg.tol = o.tol;
  cfg.positivity_samples = o.samples;
  cfg.seed = *o.seed;
  const DivisibilityReport rep = divisibility_scan(traj, default_pair_grid(traj, o.pair_stride), cfg);
  Report pairs = Report::array();
  for (const PairVerdict& v : rep.pairs) pairs.push_back(pair_to_json(v, traj));
  e["pairs"] = std::move(pairs);

  const DynmapGeneratorCheck gen = dynmap_generator_check(s, generator_config(o));
  Report segs = Report::array();
  bool generator_negative = false;
  bool generator_unsettled = false;
  for (std::size_t k = 0; k < gen.segments.size(); ++k) {
    const GeneratorClassification& cls = gen.segments[k];
    Report sj = classification_to_json(cls, dual(s.generator(k)));
    sj["t_start"] = s.segments[k].t_start;
    segs.push_back(std::move(sj));
    const ConeVerdict& v = cls.cc_decomposable;
    if (!v.converged) {
      generator_unsettled = true;
    } else if (!v.member && !v.marginal) {
      generator_negative = true;
    }
  }
  e["generator_check"] = {{"d_divisible", gen.d_divisible}, {"segments", std::move(segs)}};

  const bool negative = rep.indecomposable > 0 || generator_negative;
  e["aggregate"] = {{"pairs", rep.pairs.size()},
                    {"indecomposable", rep.indecomposable},
                    {"marginal", rep.marginal},
                    {"inconclusive", rep.inconclusive},
                    {"singular", rep.singular},
                    {"cp_divisible", rep.cp_divisible},
                    {"d_divisible", rep.d_divisible},
                    {"verdict", negative ? "not D-divisible: indecomposable propagator or generator found"
                                         : "D-divisible on the sampled grid"},
                    {"caveat", kDivisibilityCaveat}};
  if (negative) return 1;
  if (rep.inconclusive > 0 || generator_unsettled) return 3;
  return 0;
}

inline bool applies(const std::string& command, const ScenarioObject& obj) {
  if (command == "classify-map" || command == "decompose-map") return obj.is_map();
  if (command == "check-generator") return obj.is_generator();
  return obj.is_schedule();
}

inline const char* expected_kind(const std::string& command) {
  if (command == "classify-map" || command == "decompose-map") return "a map";
  if (command == "check-generator") return "a generator";
  return "a schedule";
}

inline Report report_header(const Options& o) {
  Report report;
  report["tool"] = "decdyn";
  report["version"] = kToolVersion;
  report["command"] = o.command;
  report["scenario"] = o.scenario;
  report["seed"] = o.seed ? Report(*o.seed) : Report(nullptr);
  report["options"] = options_to_json(o);
  report["conventions"] = {
      {"vec", "row-stacking"},
      {"choi", "sum_ij E_ij (x) Phi(E_ij)"},
      {"witness_partial_transpose", "second factor"}};
  return report;
}

inline CommandResult input_error(Report report, const std::string& message) {
  report["error"] = {{"type", "input"}, {"message", message}};
  report["exit_code"] = 2;
  report["status"] = status_name(2);
  return {std::move(report), 2};
}

}  // namespace detail

/// Runs one command on an already parsed scenario.
inline CommandResult run_command(const Options& o, const Scenario& scenario) {
  Report report = detail::report_header(o);
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), o.command) == names.end()) {
    return detail::input_error(std::move(report), "unknown command '" + o.command + "'");
  }
  if (!o.seed) {
    return detail::input_error(std::move(report), "a seed is required (--seed)");
  }
  if (o.command == "evolve" || o.command == "check-divisibility") {
    try {
      detail::parse_method(o.method);
    } catch (const Error& e) {
      return detail::input_error(std::move(report), e.what());
    }
  }

  std::vector<std::string> selected;
  if (o.object) {
    const auto it = scenario.objects.find(*o.object);
    if (it == scenario.objects.end()) {
      return detail::input_error(std::move(report), "no object named '" + *o.object + "'");
    }
    if (!detail::applies(o.command, it->second)) {
      return detail::input_error(std::move(report), "object '" + *o.object + "' is not " +
                                                        detail::expected_kind(o.command));
    }
    selected.push_back(*o.object);
  } else {
    for (const auto& [name, obj] : scenario.objects) {
      if (detail::applies(o.command, obj)) selected.push_back(name);
    }
    if (selected.empty()) {
      return detail::input_error(std::move(report), std::string("scenario holds no ") +
                                                        detail::expected_kind(o.command) +
                                                        " object");
    }
  }

  detail::ObjectBody body;
  if (o.command == "classify-map") {
    body = [&o](const ScenarioObject& obj, Report& e) { return detail::classify_map(obj, e, o); };
  } else if (o.command == "decompose-map") {
    body = [&o](const ScenarioObject& obj, Report& e) { return detail::decompose_map(obj, e, o); };
  } else if (o.command == "check-generator") {
    body = [&o](const ScenarioObject& obj, Report& e) { return detail::check_generator(obj, e, o); };
  } else if (o.command == "evolve") {
    body = [&o](const ScenarioObject& obj, Report& e) { return detail::evolve(obj, e, o); };
  } else {
    body = [&o](const ScenarioObject& obj, Report& e) {
      return detail::check_divisibility(obj, e, o);
    };
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  Report objects = Report::array();
  for (const std::string& name : selected) {
    int object_code = 0;
    objects.push_back(detail::run_object(name, scenario.objects.at(name), body, object_code));
    code = detail::worst(code, object_code);
  }
  report["objects"] = std::move(objects);
  if (o.timing) {
    report["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  report["exit_code"] = code;
  report["status"] = detail::status_name(code);
  return {std::move(report), code};
}

/// Loads the scenario named in the options and runs the command. Scenario
/// errors become exit code 2 with the offending JSON path in the report.
inline CommandResult run_command(const Options& o) {
  Scenario scenario;
  try {
    scenario = load_scenario(o.scenario);
  } catch (const ScenarioError& e) {
    Report report = detail::report_header(o);
    report["error"] = {{"type", "scenario"}, {"path", e.path()}, {"message", e.what()}};
    report["exit_code"] = 2;
    report["status"] = detail::status_name(2);
    return {std::move(report), 2};
  }
  return run_command(o, scenario);
}

inline std::string render(const Report& r, Format f) {
  return f == Format::machine ? render_machine(r) : render_human(r);
}

}  // namespace decdyn::io

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

// Scenario files: named maps and dynamics in JSON. Complex
// numbers are [re, im] pairs and matrices are row-major nested arrays.
// Parsing is strict: unknown or missing fields raise ScenarioError with the
// JSON path of the offending value.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "decdyn/decdyn.hpp"

namespace decdyn::io {

using Json = nlohmann::json;

class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& path, const std::string& what)
      : Error("scenario: " + path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline constexpr const char* kScenarioVersion = "1";

struct MapObject {
  SuperOperator map;
};

struct GeneratorObject {
  Picture picture = Picture::heisenberg;
  /// The generator in its declared picture.
  SuperOperator generator;
  /// How the generator was given: "spec", "nonunital", "dissipator" or
  /// "superop".
  std::string form;
  /// Map whose (nonunital) dissipation property is checked, Heisenberg
  /// picture: the CP-type part for structured forms, the whole generator
  /// otherwise.
  SuperOperator dissipation_target;
  bool nonunital = false;

  SuperOperator heisenberg() const {
    return picture == Picture::heisenberg ? generator : dual(generator);
  }
};

struct ScenarioObject {
  std::string kind;
  std::string description;
  std::variant<MapObject, GeneratorObject, GeneratorSchedule> value;

  bool is_map() const { return std::holds_alternative<MapObject>(value); }
  bool is_generator() const { return std::holds_alternative<GeneratorObject>(value); }
  bool is_schedule() const { return std::holds_alternative<GeneratorSchedule>(value); }
};

struct Scenario {
  std::string version;
  /// Sorted by name, which fixes the report order.
  std::map<std::string, ScenarioObject> objects;
};

namespace detail {

inline void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
}

inline void expect_keys(const Json& j, const std::string& path,
                        const std::set<std::string>& required,
                        const std::set<std::string>& optional) {
  expect_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw ScenarioError(path, "unknown field '" + key + "'");
    }
  }
  for (const std::string& key : required) {
    if (!j.contains(key)) throw ScenarioError(path, "missing field '" + key + "'");
  }
}

inline double parse_real(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ScenarioError(path, "expected a finite number");
  return x;
}

inline std::size_t parse_count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) {
    throw ScenarioError(path, "expected a positive integer");
  }
  return j.get<std::size_t>();
}

inline std::string parse_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ScenarioError(path, "expected a string");
  return j.get<std::string>();
}

inline Complex parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw ScenarioError(path, "expected a complex number [re, im]");
  }
  return {parse_real(j[0], path + "[0]"), parse_real(j[1], path + "[1]")};
}

inline ComplexMatrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ScenarioError(path, "expected a non-empty list of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].empty()) throw ScenarioError(row_path, "expected a non-empty row");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) throw ScenarioError(row_path, "ragged matrix rows");
  }
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(
          j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline ComplexMatrix parse_square(const Json& j, const std::string& path, std::size_t d = 0) {
  ComplexMatrix m = parse_matrix(j, path);
  if (m.rows() != m.cols()) throw ScenarioError(path, "expected a square matrix");
  if (d != 0 && static_cast<std::size_t>(m.rows()) != d) {
    throw ScenarioError(path, "expected a " + std::to_string(d) + "x" + std::to_string(d) +
                                  " matrix");
  }
  return m;
}

inline std::vector<ComplexMatrix> parse_matrix_list(const Json& j, const std::string& path,
                                                    std::size_t d) {
  if (!j.is_array()) throw ScenarioError(path, "expected a list of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(parse_square(j[k], path + "[" + std::to_string(k) + "]", d));
  }
  return out;
}

inline Picture parse_picture(const Json& j, const std::string& path) {
  const std::string p = parse_string(j, path);
  if (p == "heisenberg") return Picture::heisenberg;
  if (p == "schrodinger") return Picture::schrodinger;
  throw ScenarioError(path, "picture must be 'heisenberg' or 'schrodinger'");
}

/// Resolves map objects, including references to other top-level maps by
/// name. Tracks the reference chain to reject cycles.
class MapResolver {
 public:
  explicit MapResolver(const Json& objects) : objects_(objects) {}

  SuperOperator resolve(const Json& j, const std::string& path) {
    if (j.is_string()) return resolve_reference(j.get<std::string>(), path);
    return parse_inline(j, path);
  }

  SuperOperator resolve_reference(const std::string& name, const std::string& path) {
    if (!objects_.contains(name)) throw ScenarioError(path, "no object named '" + name + "'");
    if (std::find(stack_.begin(), stack_.end(), name) != stack_.end()) {
      throw ScenarioError(path, "cyclic reference through '" + name + "'");
    }
    stack_.push_back(name);
    const Json& target = objects_[name];
    if (!target.is_object() || !target.contains("kind") || !is_map_kind(target["kind"])) {
      throw ScenarioError(path, "object '" + name + "' is not a map");
    }
    SuperOperator out = parse_inline(target, "objects." + name);
    stack_.pop_back();
    return out;
  }

  static bool is_map_kind(const Json& kind) {
    static const std::set<std::string> kinds = {"superop", "choi", "kraus", "named_map",
                                                "compose", "combination"};
    return kind.is_string() && kinds.count(kind.get<std::string>()) > 0;
  }

 private:
  SuperOperator parse_inline(const Json& j, const std::string& path) {
    expect_object(j, path);
    if (!j.contains("kind")) throw ScenarioError(path, "missing field 'kind'");
    const std::string kind = parse_string(j["kind"], path + ".kind");
    if (kind == "superop" || kind == "choi") {
      expect_keys(j, path, {"kind", "dim_in", "dim_out", "matrix"}, {"description"});
      const std::size_t di = parse_count(j["dim_in"], path + ".dim_in");
      const std::size_t dout = parse_count(j["dim_out"], path + ".dim_out");
      ComplexMatrix m = parse_matrix(j["matrix"], path + ".matrix");
      try {
        if (kind == "superop") return SuperOperator(di, dout, std::move(m));
        return superop_of(ChoiMatrix(di, dout, std::move(m)));
      } catch (const DimensionError& e) {
        throw ScenarioError(path + ".matrix", e.what());
      }
    }
    if (kind == "kraus") {
      expect_keys(j, path, {"kind", "families"}, {"description"});
      const Json& families = j["families"];
      if (!families.is_array() || families.empty()) {
        throw ScenarioError(path + ".families", "expected a non-empty list");
      }
      std::optional<SuperOperator> sum;
      for (std::size_t k = 0; k < families.size(); ++k) {
        const std::string fp = path + ".families[" + std::to_string(k) + "]";
        expect_keys(families[k], fp, {"side", "operators"}, {});
        const std::string side = parse_string(families[k]["side"], fp + ".side");
        if (side != "cp" && side != "cocp") throw ScenarioError(fp + ".side", "must be 'cp' or 'cocp'");
        const Json& ops = families[k]["operators"];
        if (!ops.is_array() || ops.empty()) {
          throw ScenarioError(fp + ".operators", "expected a non-empty list of matrices");
        }
        KrausFamily family;
        family.side = side == "cp" ? KrausSide::cp : KrausSide::cocp;
        for (std::size_t m = 0; m < ops.size(); ++m) {
          family.operators.push_back(
              parse_matrix(ops[m], fp + ".operators[" + std::to_string(m) + "]"));
        }
        try {
          const SuperOperator s = superop_from_kraus(family);
          sum = sum ? *sum + s : s;
        } catch (const DimensionError& e) {
          throw ScenarioError(fp, e.what());
        }
      }
      return *sum;
    }
    if (kind == "named_map") {
      expect_keys(j, path, {"kind", "name"}, {"dim", "description"});
      const std::string name = parse_string(j["name"], path + ".name");
      const std::size_t d = j.contains("dim") ? parse_count(j["dim"], path + ".dim") : 0;
      if (name == "choi_map") {
        if (d != 0 && d != 3) throw ScenarioError(path + ".dim", "choi_map acts on M_3");
        return catalog::choi_map();
      }
      if (d == 0) throw ScenarioError(path, "named map '" + name + "' needs 'dim'");
      if (name == "identity") return catalog::identity_map(d);
      if (name == "transpose") return catalog::transpose(d);
      if (name == "depolarizing") return catalog::completely_depolarizing(d);
      throw ScenarioError(path + ".name",
                          "unknown named map (identity, transpose, depolarizing, choi_map)");
    }
    if (kind == "compose") {
      expect_keys(j, path, {"kind", "maps"}, {"description"});
      const Json& maps = j["maps"];
      if (!maps.is_array() || maps.empty()) {
        throw ScenarioError(path + ".maps", "expected a non-empty list");
      }
      // Written order: the last map acts first.
      SuperOperator out = resolve(maps[maps.size() - 1],
                                  path + ".maps[" + std::to_string(maps.size() - 1) + "]");
      for (std::size_t k = maps.size() - 1; k-- > 0;) {
        const std::string mp = path + ".maps[" + std::to_string(k) + "]";
        try {
          out = compose(resolve(maps[k], mp), out);
        } catch (const DimensionError& e) {
          throw ScenarioError(mp, e.what());
        }
      }
      return out;
    }
    if (kind == "combination") {
      expect_keys(j, path, {"kind", "terms"}, {"description"});
      const Json& terms = j["terms"];
      if (!terms.is_array() || terms.empty()) {
        throw ScenarioError(path + ".terms", "expected a non-empty list");
      }
      std::optional<SuperOperator> sum;
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string tp = path + ".terms[" + std::to_string(k) + "]";
        expect_keys(terms[k], tp, {"coefficient", "map"}, {});
        const double c = parse_real(terms[k]["coefficient"], tp + ".coefficient");
        const SuperOperator s = c * resolve(terms[k]["map"], tp + ".map");
        try {
          sum = sum ? *sum + s : s;
        } catch (const DimensionError& e) {
          throw ScenarioError(tp, e.what());
        }
      }
      return *sum;
    }
    throw ScenarioError(path + ".kind", "'" + kind + "' is not a map kind");
  }

  const Json& objects_;
  std::vector<std::string> stack_;
};

inline DecomposableGeneratorSpec parse_spec(const Json& j, const std::string& path) {
  expect_keys(j, path, {"H"}, {"V", "W"});
  DecomposableGeneratorSpec spec;
  spec.H = parse_square(j["H"], path + ".H");
  const std::size_t d = spec.dim();
  if (j.contains("V")) spec.V_list = parse_matrix_list(j["V"], path + ".V", d);
  if (j.contains("W")) spec.W_list = parse_matrix_list(j["W"], path + ".W", d);
  if (relative_asymmetry(spec.H) > kHermitianTol) throw ScenarioError(path + ".H", "not Hermitian");
  return spec;
}

inline NonunitalGeneratorSpec parse_nonunital(const Json& j, const std::string& path) {
  expect_keys(j, path, {"K"}, {"phi", "psi"});
  NonunitalGeneratorSpec spec;
  spec.K = parse_square(j["K"], path + ".K");
  const std::size_t d = spec.dim();
  if (j.contains("phi")) spec.phi_kraus.operators = parse_matrix_list(j["phi"], path + ".phi", d);
  if (j.contains("psi")) spec.psi_kraus.operators = parse_matrix_list(j["psi"], path + ".psi", d);
  return spec;
}

/// Heisenberg generator rate (phi - 1/2 {phi(1), .}) + i[H, .].
struct Dissipator {
  SuperOperator heisenberg;
};

inline Dissipator parse_dissipator(const Json& j, const std::string& path, MapResolver& maps) {
  expect_keys(j, path, {"map"}, {"rate", "H"});
  const SuperOperator phi = maps.resolve(j["map"], path + ".map");
  if (!phi.square()) throw ScenarioError(path + ".map", "map must act on a single M_d");
  const double rate = j.contains("rate") ? parse_real(j["rate"], path + ".rate") : 1.0;
  SuperOperator l = rate * (phi - 0.5 * left_right_multiplication(unit_image(phi)));
  if (j.contains("H")) {
    const ComplexMatrix h = parse_square(j["H"], path + ".H", phi.dim_in);
    if (relative_asymmetry(h) > kHermitianTol) throw ScenarioError(path + ".H", "not Hermitian");
    l = l + commutator_map(h);
  }
  return {l};
}

inline SuperOperator without_cocp_part(const DecomposableGeneratorSpec& spec) {
  SuperOperator l = build_standard_heisenberg(spec);
  if (spec.W_list.empty()) return l;
  std::vector<ComplexMatrix> wd;
  for (const ComplexMatrix& w : spec.W_list) wd.push_back(w.adjoint());
  return l - superop_from_kraus({wd, KrausSide::cocp});
}

inline GeneratorObject parse_generator(const Json& j, const std::string& path, MapResolver& maps) {
  expect_keys(j, path, {"kind", "picture"},
              {"spec", "nonunital", "dissipator", "superop", "description"});
  GeneratorObject g;
  g.picture = parse_picture(j["picture"], path + ".picture");
  int forms = 0;
  for (const char* key : {"spec", "nonunital", "dissipator", "superop"}) forms += j.contains(key);
  if (forms != 1) {
    throw ScenarioError(path, "exactly one of spec, nonunital, dissipator, superop is required");
  }
  auto in_picture = [&](const SuperOperator& heis) {
    return g.picture == Picture::heisenberg ? heis : dual(heis);
  };
  if (j.contains("spec")) {
    const DecomposableGeneratorSpec spec = parse_spec(j["spec"], path + ".spec");
    g.form = "spec";
    g.generator = in_picture(build_standard_heisenberg(spec));
    g.dissipation_target = without_cocp_part(spec);
  } else if (j.contains("nonunital")) {
    NonunitalGeneratorSpec spec = parse_nonunital(j["nonunital"], path + ".nonunital");
    g.form = "nonunital";
    g.nonunital = true;
    g.generator = in_picture(build_nonunital(spec));
    spec.psi_kraus.operators.clear();
    g.dissipation_target = build_nonunital(spec);
  } else if (j.contains("dissipator")) {
    g.form = "dissipator";
    const Dissipator dis = parse_dissipator(j["dissipator"], path + ".dissipator", maps);
    g.generator = in_picture(dis.heisenberg);
    g.dissipation_target = dis.heisenberg;
  } else {
    g.form = "superop";
    const ComplexMatrix m = parse_square(j["superop"], path + ".superop");
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
    if (n * n != static_cast<std::size_t>(m.rows())) {
      throw ScenarioError(path + ".superop", "size must be d^2 x d^2");
    }
    g.generator = SuperOperator(n, m);
    g.dissipation_target = g.heisenberg();
  }
  return g;
}

inline GeneratorSchedule parse_schedule(const Json& j, const std::string& path, MapResolver& maps) {
  expect_keys(j, path, {"kind", "segments", "horizon"}, {"description"});
  GeneratorSchedule sched;
  sched.horizon = parse_real(j["horizon"], path + ".horizon");
  const Json& segs = j["segments"];
  if (!segs.is_array() || segs.empty()) {
    throw ScenarioError(path + ".segments", "expected a non-empty list");
  }
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string sp = path + ".segments[" + std::to_string(k) + "]";
    expect_keys(segs[k], sp, {"t"}, {"spec", "superop", "dissipator"});
    int forms = 0;
    for (const char* key : {"spec", "superop", "dissipator"}) forms += segs[k].contains(key);
    if (forms != 1) throw ScenarioError(sp, "exactly one of spec, superop, dissipator is required");
    ScheduleSegment seg;
    seg.t_start = parse_real(segs[k]["t"], sp + ".t");
    if (segs[k].contains("spec")) {
      seg.generator = parse_spec(segs[k]["spec"], sp + ".spec");
    } else if (segs[k].contains("dissipator")) {
      seg.generator = dual(parse_dissipator(segs[k]["dissipator"], sp + ".dissipator", maps).heisenberg);
    } else {
      const ComplexMatrix m = parse_square(segs[k]["superop"], sp + ".superop");
      const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
      if (n * n != static_cast<std::size_t>(m.rows())) {
        throw ScenarioError(sp + ".superop", "size must be d^2 x d^2");
      }
      seg.generator = SuperOperator(n, m);
    }
    sched.segments.push_back(std::move(seg));
  }
  try {
    sched.validate();
  } catch (const Error& e) {
    throw ScenarioError(path, e.what());
  }
  return sched;
}

}  // namespace detail

inline Scenario parse_scenario(const Json& root) {
  detail::expect_keys(root, "$", {"version", "objects"}, {"description"});
  Scenario s;
  s.version = detail::parse_string(root["version"], "version");
  if (s.version != kScenarioVersion) {
    throw ScenarioError("version", "unsupported version '" + s.version + "' (expected '" +
                                       kScenarioVersion + "')");
  }
  const Json& objects = root["objects"];
  detail::expect_object(objects, "objects");
  if (objects.empty()) throw ScenarioError("objects", "no objects");
  detail::MapResolver maps(objects);
  for (const auto& [name, j] : objects.items()) {
    const std::string path = "objects." + name;
    detail::expect_object(j, path);
    if (!j.contains("kind")) throw ScenarioError(path, "missing field 'kind'");
    ScenarioObject obj;
    obj.kind = detail::parse_string(j["kind"], path + ".kind");
    if (j.contains("description")) {
      obj.description = detail::parse_string(j["description"], path + ".description");
    }
    try {
      if (detail::MapResolver::is_map_kind(j["kind"])) {
        obj.value = MapObject{maps.resolve_reference(name, path)};
      } else if (obj.kind == "generator") {
        obj.value = detail::parse_generator(j, path, maps);
      } else if (obj.kind == "schedule") {
        obj.value = detail::parse_schedule(j, path, maps);
      } else {
        throw ScenarioError(path + ".kind", "unknown kind '" + obj.kind + "'");
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw ScenarioError(path, e.what());
    }
    s.objects.emplace(name, std::move(obj));
  }
  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ScenarioError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(root);
}

inline Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("$", "cannot open '" + file + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

}  // namespace decdyn::io

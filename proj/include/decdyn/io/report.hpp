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

// Report documents. Every command builds one ordered JSON tree; the machine
// rendering is its compact dump and the human rendering walks the same tree,
// printing each number with the JSON formatter so both agree digit for digit.

#pragma once

#include <cstddef>
#include <sstream>
#include <string>

#include "json.hpp"

#include "decdyn/decdyn.hpp"

namespace decdyn::io {

using Report = nlohmann::ordered_json;

/// Row-major nested array of [re, im] pairs.
inline Report matrix_to_json(const ComplexMatrix& m) {
  Report rows = Report::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Report row = Report::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Report real_list(const std::vector<double>& xs) {
  Report out = Report::array();
  for (double x : xs) out.push_back(x);
  return out;
}

/// Eigenvalue cone verdicts carry membership and margin only.
inline Report eigen_verdict_to_json(const ConeVerdict& v) {
  return {{"member", v.member}, {"margin", v.margin}};
}

/// Witness matrix with the eigenvalues and pairing a reader needs to re-verify it.
inline Report witness_to_json(const ComplexMatrix& w, const ComplexMatrix& c, std::size_t d_in,
                              std::size_t d_out) {
  Report out;
  out["min_eigenvalue"] = min_eigenvalue(hermitian_part(w));
  out["min_eigenvalue_partial_transpose"] =
      min_eigenvalue(hermitian_part(partial_transpose(w, d_in, d_out)));
  out["pairing"] = frobenius_pairing(c, w);
  out["matrix"] = matrix_to_json(w);
  return out;
}

/// Dec-type verdict with the witness block when membership fails. `c` is
/// the matrix the verdict was computed for.
inline Report dec_verdict_to_json(const ConeVerdict& v, const ComplexMatrix& c, std::size_t d_in,
                                  std::size_t d_out) {
  Report out;
  out["member"] = v.member;
  out["marginal"] = v.marginal;
  out["converged"] = v.converged;
  out["margin"] = v.margin;
  out["iterations"] = v.iterations;
  out["method"] = v.method;
  if (v.witness) out["witness"] = witness_to_json(*v.witness, c, d_in, d_out);
  return out;
}

inline Report positivity_to_json(const PositivityVerdict& v) {
  return {{"passed", v.passed}, {"min_eigenvalue", v.min_eigenvalue}, {"samples", v.samples}};
}

inline Report dissipation_to_json(const DissipationReport& r) {
  Report levels = Report::array();
  for (const DissipationLevel& l : r.levels) {
    levels.push_back(
        {{"level", l.level}, {"worst_margin", l.worst_margin}, {"worst_sample", l.worst_family}});
  }
  Report out;
  out["passed_up_to_level"] = r.passed;
  out["max_level"] = r.max_level;
  out["samples_per_level"] = r.samples;
  out["worst_margin"] = r.worst_margin;
  out["levels"] = std::move(levels);
  return out;
}

namespace detail {

inline bool is_complex_entry(const Report& j) {
  return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number();
}

inline bool is_matrix(const Report& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const Report& row : j) {
    if (!row.is_array() || row.empty()) return false;
    for (const Report& e : row) {
      if (!is_complex_entry(e)) return false;
    }
  }
  return true;
}

inline bool is_scalar_list(const Report& j) {
  if (!j.is_array()) return false;
  for (const Report& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

inline std::string scalar_text(const Report& j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

inline void render(std::ostringstream& out, const Report& j, std::size_t indent);

inline void render_matrix_rows(std::ostringstream& out, const Report& j, std::size_t indent) {
  for (const Report& row : j) {
    out << std::string(indent, ' ');
    for (std::size_t k = 0; k < row.size(); ++k) {
      out << (k ? " " : "") << "(" << row[k][0].dump() << ", " << row[k][1].dump() << ")";
    }
    out << "\n";
  }
}

inline void render_scalar_list(std::ostringstream& out, const Report& j) {
  out << "[";
  for (std::size_t k = 0; k < j.size(); ++k) out << (k ? ", " : "") << scalar_text(j[k]);
  out << "]\n";
}

inline void render_value(std::ostringstream& out, const std::string& label, const Report& j,
                         std::size_t indent) {
  const std::string pad(indent, ' ');
  if (!j.is_structured()) {
    out << pad << label << ": " << scalar_text(j) << "\n";
  } else if (is_matrix(j)) {
    out << pad << label << ": matrix, rows of (re, im)\n";
    render_matrix_rows(out, j, indent + 2);
  } else if (is_scalar_list(j)) {
    out << pad << label << ": ";
    render_scalar_list(out, j);
  } else {
    out << pad << label << ":\n";
    render(out, j, indent + 2);
  }
}

/// One list item: "- " followed by the item, nested items indented.
inline void render_item(std::ostringstream& out, const Report& j, std::size_t indent) {
  const std::string pad(indent, ' ');
  if (!j.is_structured()) {
    out << pad << "- " << scalar_text(j) << "\n";
  } else if (is_matrix(j)) {
    out << pad << "- matrix, rows of (re, im)\n";
    render_matrix_rows(out, j, indent + 2);
  } else if (is_scalar_list(j)) {
    out << pad << "- ";
    render_scalar_list(out, j);
  } else {
    std::ostringstream body;
    render(body, j, indent + 2);
    std::string text = body.str();
    if (text.size() >= indent + 2) text.replace(0, indent + 2, pad + "- ");
    out << text;
  }
}

inline void render(std::ostringstream& out, const Report& j, std::size_t indent) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) render_value(out, key, value, indent);
  } else if (j.is_array()) {
    if (j.empty()) out << std::string(indent, ' ') << "(none)\n";
    for (const Report& item : j) render_item(out, item, indent);
  } else {
    out << std::string(indent, ' ') << scalar_text(j) << "\n";
  }
}

}  // namespace detail

/// Compact single-line JSON followed by a newline.
inline std::string render_machine(const Report& r) { return r.dump() + "\n"; }

/// Indented key: value listing of the same tree.
inline std::string render_human(const Report& r) {
  std::ostringstream out;
  detail::render(out, r, 0);
  return out.str();
}

}  // namespace decdyn::io

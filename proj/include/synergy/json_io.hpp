/*
 * Copyright 2026 The Synergy Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// JSON and CSV serialization of tables, polynomials and reports.
//
//   report      {"order": k, "entries": [{"coalition": [1, 3], "value": v}, ...]}
//   table       {"n": n, "values": [v_0, ..., v_{2^n - 1}]}   (index = bit mask)
//   polynomial  {"n": n, "center": [...], "terms": [{"m": [...], "c": v}, ...]}

#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "synergy/core.hpp"
#include "synergy/error.hpp"
#include "synergy/expr.hpp"
#include "synergy/polynomial.hpp"
#include "synergy/set_methods.hpp"

namespace synergy {

using Json = nlohmann::json;

inline Json coalition_to_json(Coalition s) { return Json(s.members()); }

// "1+3", or "-" for the empty coalition.
inline std::string coalition_to_csv(Coalition s) {
  if (s.empty()) return "-";
  std::string out;
  for (int i : s.members()) {
    if (!out.empty()) out += "+";
    out += std::to_string(i);
  }
  return out;
}

inline Json report_to_json(const InteractionReport& report) {
  Json entries = Json::array();
  for (const auto& [s, v] : report) {
    entries.push_back({{"coalition", coalition_to_json(s)}, {"value", v}});
  }
  return {{"order", report.order()}, {"entries", std::move(entries)}};
}

inline std::string report_to_csv(const InteractionReport& report) {
  std::string out = "coalition;value\n";
  for (const auto& [s, v] : report) {
    out += coalition_to_csv(s) + ";" + format_double(v) + "\n";
  }
  return out;
}

inline Json table_to_json(const SetFunctionTable& table) {
  return {{"n", table.n}, {"values", table.values}};
}

inline Json synergy_to_json(const SynergyTable& table) {
  return {{"n", table.n}, {"values", table.values}};
}

// Coalition-keyed CSV of a lattice table, rows in lexicographic order.
inline std::string lattice_to_csv(const std::vector<double>& values) {
  std::vector<Coalition> order;
  for (std::uint64_t s = 0; s < values.size(); ++s) order.emplace_back(s);
  std::sort(order.begin(), order.end());
  std::string out = "coalition;value\n";
  for (Coalition s : order) {
    out += coalition_to_csv(s) + ";" + format_double(values[s.mask()]) + "\n";
  }
  return out;
}

inline Json point_to_json(const FeaturePoint& p) { return Json(p.values); }

inline Json poly_to_json(const SparsePolynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"m", m.exponents()}, {"c", c}});
  return {{"n", p.dim()}, {"center", p.center().values}, {"terms", std::move(terms)}};
}

inline Json instance_to_json(const ProblemInstance& inst) {
  return {{"x", inst.x.values},
          {"baseline", inst.baseline.values},
          {"box", {{"lower", inst.box.lower.values}, {"upper", inst.box.upper.values}}}};
}

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DomainError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline int read_dim(const Json& j) {
  const Json& n = require(j, "n");
  if (!n.is_number_integer()) throw DomainError("field \"n\" must be an integer");
  const int dim = n.get<int>();
  check_dimension(dim);
  return dim;
}

inline std::vector<double> read_reals(const Json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_number()) throw DomainError(std::string(what) + " must hold numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw NonFiniteValue(std::string(what) + " holds a non-finite value");
    out.push_back(d);
  }
  return out;
}

}  // namespace detail

inline SetFunctionTable table_from_json(const Json& j) {
  const int n = detail::read_dim(j);
  detail::check_table_dim(n);
  return SetFunctionTable(n, detail::read_reals(detail::require(j, "values"), "\"values\""));
}

inline SparsePolynomial poly_from_json(const Json& j) {
  const int n = detail::read_dim(j);
  FeaturePoint center = FeaturePoint::zeros(n);
  if (j.contains("center")) {
    center = FeaturePoint(detail::read_reals(j.at("center"), "\"center\""));
    if (center.dim() != n) throw DimensionMismatch("\"center\" must have n entries");
  }
  SparsePolynomial p(center);
  const Json& terms = detail::require(j, "terms");
  if (!terms.is_array()) throw DomainError("\"terms\" must be an array");
  for (const Json& t : terms) {
    const Json& m = detail::require(t, "m");
    if (!m.is_array()) throw DomainError("term exponent \"m\" must be an array");
    std::vector<int> exps;
    for (const Json& e : m) {
      if (!e.is_number_integer()) throw DomainError("exponents must be integers");
      exps.push_back(e.get<int>());
    }
    const double c = detail::read_reals(Json::array({detail::require(t, "c")}), "\"c\"")[0];
    p.add_term(MultiIndex(std::move(exps)), c);
  }
  return p;
}

// Parses JSON text, mapping syntax errors to ParseError.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

}  // namespace synergy

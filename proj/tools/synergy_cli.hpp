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

// Command-line front end. Kept in a header so the tests can drive it
// in-process through run().
//
// Exit codes: 0 ok, 1 unexpected axiom failure, 2 usage or validation error.

#pragma once

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "synergy/synergy.hpp"

namespace synergy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAxiomFailure = 1;
inline constexpr int kExitUsage = 2;

inline const std::vector<std::string>& method_ids() {
  static const std::vector<std::string> ids{"shapley", "shapley-taylor", "rs",     "rs-aug",
                                            "ig",      "ih",             "ih-aug", "sop"};
  return ids;
}

inline bool is_binary_method(const std::string& m) {
  return m == "shapley" || m == "shapley-taylor" || m == "rs" || m == "rs-aug";
}
inline bool is_attribution(const std::string& m) { return m == "shapley" || m == "ig"; }

struct RunConfig {
  std::string expr;
  std::string poly_file;
  std::string table_file;
  std::string x;
  std::string baseline;
  std::string method = "shapley-taylor";
  std::string against;
  std::optional<int> k;
  std::vector<std::string> lets;
  int quad_nodes = QuadratureConfig{}.nodes;
  int quad_panels = QuadratureConfig{}.panels;
  int taylor_order = 10;
  std::string output = "json";
  // check
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<std::string> methods;
  std::vector<std::string> axioms;
};

// What the function source resolved to.
struct Source {
  std::variant<SetFunctionTable, SparsePolynomial, Expr> function;
  ProblemInstance instance;  // unset fields for tables

  bool is_table() const { return std::holds_alternative<SetFunctionTable>(function); }
  int dim() const {
    if (const auto* t = std::get_if<SetFunctionTable>(&function)) return t->n;
    return instance.dim();
  }
};

namespace detail {

inline std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    double v = 0.0;
    const char* first = item.data();
    const char* last = first + item.size();
    if (!item.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw DomainError(std::string(flag) + ": \"" + item + "\" is not a finite real");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

inline std::map<std::string, double> parse_lets(const std::vector<std::string>& lets) {
  std::map<std::string, double> out;
  for (const std::string& let : lets) {
    const std::size_t eq = let.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DomainError("--let expects NAME=VALUE, got \"" + let + "\"");
    }
    const std::string name = let.substr(0, eq);
    const auto value = parse_reals(let.substr(eq + 1), "--let");
    if (value.size() != 1) throw DomainError("--let " + name + " needs a single value");
    out[name] = value.front();
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Source load_source(const RunConfig& cfg) {
  const int given = !cfg.expr.empty() + !cfg.poly_file.empty() + !cfg.table_file.empty();
  if (given != 1) throw DomainError("give exactly one of --expr, --poly, --table");
  Source src;
  if (!cfg.table_file.empty()) {
    if (!cfg.x.empty() || !cfg.baseline.empty()) {
      throw DomainError("--x/--baseline do not apply to a table; it already fixes both");
    }
    src.function = table_from_json(parse_json(read_file(cfg.table_file)));
    return src;
  }
  if (cfg.x.empty()) throw DomainError("--x is required");
  FeaturePoint x(parse_reals(cfg.x, "--x"));
  check_dimension(x.dim());
  FeaturePoint baseline = FeaturePoint::zeros(x.dim());
  if (!cfg.baseline.empty()) baseline = FeaturePoint(parse_reals(cfg.baseline, "--baseline"));
  if (baseline.dim() != x.dim()) {
    throw DimensionMismatch("--x and --baseline have different lengths");
  }
  if (!cfg.expr.empty()) {
    src.function = parse(cfg.expr, x.dim(), parse_lets(cfg.lets));
  } else {
    SparsePolynomial p = poly_from_json(parse_json(read_file(cfg.poly_file)));
    if (p.dim() != x.dim()) throw DimensionMismatch("--x length differs from polynomial n");
    if (!cfg.baseline.empty() && !(p.center() == baseline)) {
      throw DomainError("--baseline must equal the polynomial's center");
    }
    baseline = p.center();
    src.function = std::move(p);
  }
  src.instance = ProblemInstance::tight(std::move(x), std::move(baseline));
  return src;
}

inline double evaluate(const Source& src, const FeaturePoint& y) {
  if (const auto* p = std::get_if<SparsePolynomial>(&src.function)) return poly_eval(*p, y);
  return expr_eval(std::get<Expr>(src.function), y);
}

inline SetFunctionTable table_of(const Source& src) {
  if (const auto* t = std::get_if<SetFunctionTable>(&src.function)) return *t;
  return build_table(src.instance, [&](const FeaturePoint& y) { return evaluate(src, y); });
}

// Polynomial centered at the baseline: exact for polynomial input, a Taylor
// truncation of order `taylor_order` for transcendental expressions.
inline SparsePolynomial polynomial_of(const Source& src, int taylor_order) {
  if (const auto* p = std::get_if<SparsePolynomial>(&src.function)) return *p;
  const Expr& e = std::get<Expr>(src.function);
  if (auto p = to_polynomial(e, src.instance.baseline)) return *p;
  return taylor(e, src.instance.baseline, taylor_order);
}

inline bool transcendental(const Source& src) {
  const auto* e = std::get_if<Expr>(&src.function);
  return e != nullptr && e->is_transcendental();
}

inline int resolve_order(const RunConfig& cfg, const std::string& method, int n) {
  if (is_attribution(method)) {
    if (cfg.k && *cfg.k != 1) throw DomainError(method + " is an attribution method; use -k 1");
    return 1;
  }
  const int k = cfg.k.value_or(std::min(2, n));
  if (k < 1 || k > n) throw DomainError("-k must satisfy 1 <= k <= n");
  return k;
}

inline void check_method(const std::string& m) {
  for (const auto& id : method_ids()) {
    if (id == m) return;
  }
  throw DomainError("unknown method \"" + m + "\"");
}

inline QuadratureConfig quadrature(const RunConfig& cfg) {
  QuadratureConfig q{cfg.quad_nodes, cfg.quad_panels};
  q.validate();
  return q;
}

inline InteractionReport run_method(const RunConfig& cfg, const Source& src,
                                    const std::string& method) {
  check_method(method);
  const int n = src.dim();
  const int k = resolve_order(cfg, method, n);
  if (is_binary_method(method)) {
    const SetFunctionTable table = table_of(src);
    if (method == "shapley") return shapley(table);
    if (method == "shapley-taylor") return shapley_taylor(table, k);
    if (method == "rs") return recursive_shapley(table, k);
    return augmented_recursive_shapley(table, k);
  }
  if (src.is_table()) {
    throw CapabilityMismatch(method + " needs gradients; a set-function table has none");
  }
  // Transcendental input: quadrature where an engine exists.
  if (transcendental(src)) {
    const Expr& e = std::get<Expr>(src.function);
    if (method == "ig" || (method == "ih" && k == 1)) {
      return ig_quadrature(e, src.instance, quadrature(cfg));
    }
    if (method == "ih" && k == 2) return ih2_quadrature(e, src.instance, quadrature(cfg));
  }
  const SparsePolynomial p = polynomial_of(src, cfg.taylor_order);
  const FeaturePoint& x = src.instance.x;
  if (method == "ig") return ig_exact(p, x);
  if (method == "ih") return ih_exact(p, x, k);
  if (method == "ih-aug") return ih_star_exact(p, x, k);
  return sum_of_powers_exact(p, x, k);
}

// Independent engine for each method: a second formula, an enumeration
// oracle or quadrature.
inline std::pair<std::string, InteractionReport> reference_engine(const RunConfig& cfg,
                                                                  const Source& src,
                                                                  const std::string& method) {
  const int n = src.dim();
  const int k = resolve_order(cfg, method, n);
  if (is_binary_method(method)) {
    const SetFunctionTable table = table_of(src);
    if (method == "shapley") return {"marginal-contributions", shapley_marginal(table)};
    if (method == "shapley-taylor") {
      return {"discrete-derivatives", shapley_taylor_formula(table, k)};
    }
    if (method == "rs") return {"sequence-oracle", recursive_shapley_oracle(table, k)};
    // Own synergies for |S| <= k, the sequence oracle on the rest.
    SynergyTable syn = mobius(table);
    std::map<Coalition, double> own;
    for (std::uint64_t s = 1; s < syn.values.size(); ++s) {
      if (std::popcount(s) <= k) {
        own[Coalition(s)] = syn.values[s];
        syn.values[s] = 0.0;
      }
    }
    InteractionReport r = recursive_shapley_oracle(mobius_inverse(syn), k);
    for (const auto& [s, v] : own) r[s] += v;
    return {"definition", r};
  }
  if (src.is_table()) {
    throw CapabilityMismatch(method + " needs gradients; a set-function table has none");
  }
  const SparsePolynomial p = polynomial_of(src, cfg.taylor_order);
  const FeaturePoint& x = src.instance.x;
  if (method == "ig") {
    const Expr e = std::holds_alternative<Expr>(src.function) ? std::get<Expr>(src.function)
                                                              : poly_to_expr(p);
    return {"quadrature", ig_quadrature(e, src.instance, quadrature(cfg))};
  }
  if (method == "ih") {
    if (k != 2) return {"recursive-ig", ih_exact(p, x, k)};
    const Expr e = std::holds_alternative<Expr>(src.function) ? std::get<Expr>(src.function)
                                                              : poly_to_expr(p);
    return {"quadrature", ih2_quadrature(e, src.instance, quadrature(cfg))};
  }
  if (method == "ih-aug") return {"definition", ih_star_via_synergy(p, x, k)};
  return {"construction-oracle", sum_of_powers_oracle(p, x, k)};
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline void check_output(const RunConfig& cfg) {
  if (cfg.output != "json" && cfg.output != "csv") {
    throw DomainError("--output must be json or csv");
  }
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_interact(const RunConfig& cfg, std::ostream& out) {
  check_output(cfg);
  const Source src = load_source(cfg);
  const InteractionReport r = run_method(cfg, src, cfg.method);
  if (cfg.output == "csv") {
    out << report_to_csv(r);
  } else {
    emit(out, report_to_json(r));
  }
  return kExitOk;
}

inline int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  check_output(cfg);
  const Source src = load_source(cfg);
  if (const auto* t = std::get_if<SetFunctionTable>(&src.function)) {
    const SynergyTable syn = mobius(*t);
    if (cfg.output == "csv") {
      out << lattice_to_csv(syn.values);
    } else {
      emit(out, synergy_to_json(syn));
    }
    return kExitOk;
  }
  const int n = src.dim();
  InteractionReport r(n, n);
  Json pieces = Json::array();
  std::map<Coalition, SparsePolynomial> poly_pieces;
  auto add_polynomial = [&](const SparsePolynomial& p) {
    for (const auto& [s, piece] : synergy_split(p)) {
      r[s] += poly_eval(piece, src.instance.x);
      auto [it, inserted] = poly_pieces.try_emplace(s, piece);
      if (!inserted) it->second = poly_add(it->second, piece);
    }
  };
  if (const auto* p = std::get_if<SparsePolynomial>(&src.function)) {
    add_polynomial(*p);
  } else {
    // Polynomial addends split symbolically; the rest go through the
    // masked evaluations and the Mobius transform.
    for (const Expr& addend : addends(std::get<Expr>(src.function))) {
      if (auto p = to_polynomial(addend, src.instance.baseline)) {
        add_polynomial(*p);
        continue;
      }
      const SetFunctionTable table = build_table(
          src.instance, [&](const FeaturePoint& y) { return expr_eval(addend, y); });
      const SynergyTable syn = mobius(table);
      for (std::uint64_t s = 0; s < syn.values.size(); ++s) r[Coalition(s)] += syn.values[s];
    }
  }
  if (cfg.output == "csv") {
    out << report_to_csv(r);
    return kExitOk;
  }
  for (const auto& [s, piece] : poly_pieces) {
    if (piece.empty()) continue;
    pieces.push_back({{"coalition", coalition_to_json(s)}, {"expr", to_string(poly_to_expr(piece))}});
  }
  Json j = report_to_json(r);
  j["pieces"] = pieces;
  emit(out, j);
  return kExitOk;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  check_output(cfg);
  const Source src = load_source(cfg);
  std::string left_label = cfg.method;
  const InteractionReport left = run_method(cfg, src, cfg.method);
  std::string right_label;
  InteractionReport right;
  if (cfg.against.empty()) {
    auto [label, report] = reference_engine(cfg, src, cfg.method);
    right_label = cfg.method + ":" + label;
    right = std::move(report);
  } else {
    RunConfig other = cfg;
    if (is_attribution(cfg.against)) other.k.reset();
    if (is_attribution(cfg.method) && !is_attribution(cfg.against)) other.k = cfg.k.value_or(1);
    right_label = cfg.against;
    right = run_method(other, src, cfg.against);
  }
  std::map<Coalition, std::pair<std::optional<double>, std::optional<double>>> rows;
  for (const auto& [s, v] : left) rows[s].first = v;
  for (const auto& [s, v] : right) rows[s].second = v;
  double max_residual = 0.0;
  for (const auto& [s, lr] : rows) {
    if (lr.first && lr.second) max_residual = std::max(max_residual, std::abs(*lr.first - *lr.second));
  }
  if (cfg.output == "csv") {
    out << "coalition;" << left_label << ";" << right_label << "\n";
    for (const auto& [s, lr] : rows) {
      out << coalition_to_csv(s) << ";" << (lr.first ? format_double(*lr.first) : "") << ";"
          << (lr.second ? format_double(*lr.second) : "") << "\n";
    }
    out << "max_residual;" << format_double(max_residual) << ";\n";
    return kExitOk;
  }
  Json entries = Json::array();
  for (const auto& [s, lr] : rows) {
    entries.push_back({{"coalition", coalition_to_json(s)},
                       {"left", lr.first ? Json(*lr.first) : Json()},
                       {"right", lr.second ? Json(*lr.second) : Json()}});
  }
  emit(out, {{"left", left_label},
             {"right", right_label},
             {"entries", entries},
             {"max_residual", max_residual}});
  return kExitOk;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  check_output(cfg);
  SuiteConfig suite;
  if (!cfg.config_file.empty()) suite = suite_config_from_json(parse_json(read_file(cfg.config_file)));
  if (cfg.seed) suite.seed = *cfg.seed;
  if (cfg.trials) {
    if (*cfg.trials < 1) throw DomainError("--trials must be >= 1");
    suite.trials = *cfg.trials;
  }
  const std::vector<MethodUnderTest> registry = default_methods();
  for (const std::string& m : cfg.methods) {
    if (std::none_of(registry.begin(), registry.end(), [&](const auto& r) { return r.id == m; })) {
      throw DomainError("unknown method \"" + m + "\"");
    }
    suite.methods.push_back(m);
  }
  for (const std::string& a : cfg.axioms) {
    const auto axiom = axiom_from_name(a);
    if (!axiom) throw DomainError("unknown axiom \"" + a + "\"");
    suite.axioms.push_back(*axiom);
  }
  const SuiteResult result = run_suite(suite, registry);
  if (cfg.output == "csv") {
    out << "method;axiom;status;expected;max_residual\n";
    for (const auto& e : result.entries) {
      out << e.report.method << ";" << axiom_name(e.report.axiom) << ";"
          << status_name(e.report.status) << ";" << status_name(e.expected) << ";"
          << format_double(e.report.max_residual) << "\n";
    }
    if (result.ran_uniqueness) {
      out << result.uniqueness.method << ";uniqueness;" << status_name(result.uniqueness.status)
          << ";pass;" << format_double(result.uniqueness.max_residual) << "\n";
    }
  } else {
    emit(out, suite_to_json(result));
  }
  return result.ok() ? kExitOk : kExitAxiomFailure;
}

inline void add_source_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--expr", cfg.expr, "Expression in x1..xn");
  sub.add_option("--poly", cfg.poly_file, "Polynomial JSON file");
  sub.add_option("--table", cfg.table_file, "Set-function table JSON file");
  sub.add_option("--x", cfg.x, "Input point, comma-separated");
  sub.add_option("--baseline", cfg.baseline, "Baseline point, comma-separated (default zeros)");
  sub.add_option("--let", cfg.lets, "Bind a named constant, NAME=VALUE");
  sub.add_option("--quad-nodes", cfg.quad_nodes, "Gauss-Legendre nodes per panel");
  sub.add_option("--quad-panels", cfg.quad_panels, "Composite quadrature panels");
  sub.add_option("--taylor-order", cfg.taylor_order,
                 "Truncation order for transcendental input to polynomial-only methods");
}

}  // namespace detail

// Runs the command line; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attribution and interaction methods for functions of n features", "synergy"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* interact = app.add_subcommand("interact", "Compute an interaction report");
  CLI::App* decompose = app.add_subcommand("decompose", "Split a function into synergies");
  CLI::App* compare = app.add_subcommand("compare", "Run two engines side by side");
  CLI::App* check = app.add_subcommand("check", "Run the axiom suite");
  for (CLI::App* sub : {interact, decompose, compare}) {
    detail::add_source_options(*sub, cfg);
    sub->add_option("--output", cfg.output, "json or csv");
  }
  for (CLI::App* sub : {interact, compare}) {
    sub->add_option("--method", cfg.method, "shapley, shapley-taylor, rs, rs-aug, ig, ih, ih-aug, sop");
    sub->add_option("-k", cfg.k, "Interaction order");
  }
  compare->add_option("--against", cfg.against, "Second method (default: independent engine)");
  check->add_option("--config", cfg.config_file, "Suite config JSON file");
  check->add_option("--seed", cfg.seed, "Master seed");
  check->add_option("--trials", cfg.trials, "Trials per axiom");
  check->add_option("--method", cfg.methods, "Restrict to a method (repeatable)");
  check->add_option("--axiom", cfg.axioms, "Restrict to an axiom (repeatable)");
  check->add_option("--output", cfg.output, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a usage error.
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*interact) return detail::cmd_interact(cfg, out);
    if (*decompose) return detail::cmd_decompose(cfg, out);
    if (*compare) return detail::cmd_compare(cfg, out);
    return detail::cmd_check(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace synergy::cli

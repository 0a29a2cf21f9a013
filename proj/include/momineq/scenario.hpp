#pragma once

// Scenario files: a JSON document naming a product space, a functional from
// the built-in registry, a coordinate reduction and a list of checks. Parsing
// validates field types, registry ids and q domains and reports the offending
// field on failure.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "momineq/classical_apps.hpp"
#include "momineq/increments.hpp"
#include "momineq/polynomial_apps.hpp"
#include "momineq/product_space.hpp"

namespace momineq {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class QDomain { real_ge1, real_ge2, int_ge1, int_ge2, none };

struct TheoremInfo {
  const char* id;
  QDomain qdom;
  bool mc_supported;
};

inline const std::vector<TheoremInfo>& theorem_registry() {
  static const std::vector<TheoremInfo> reg = {
      {"thm1_plus", QDomain::int_ge2, true},
      {"thm1_norm", QDomain::int_ge2, true},
      {"thm2_plus", QDomain::real_ge2, true},
      {"thm2_plus_tight", QDomain::real_ge2, true},
      {"thm2_minus", QDomain::real_ge2, true},
      {"thm2_minus_tight", QDomain::real_ge2, true},
      {"thm3", QDomain::real_ge2, true},
      {"thm4_vplus", QDomain::real_ge2, true},
      {"thm4_v", QDomain::real_ge2, true},
      {"cor1_mean", QDomain::int_ge1, true},
      {"cor1_plus", QDomain::real_ge2, true},
      {"cor1_minus", QDomain::int_ge2, true},
      {"cor2", QDomain::int_ge2, true},
      {"cor3_mean", QDomain::real_ge2, true},
      {"cor3_plus", QDomain::real_ge2, true},
      {"cor3_minus", QDomain::real_ge2, true},
      {"thm7_pos", QDomain::int_ge2, true},
      {"thm7_abs", QDomain::int_ge2, true},
      {"marcinkiewicz", QDomain::int_ge2, true},
      {"thm8_plus", QDomain::real_ge2, true},
      {"thm8_minus", QDomain::int_ge2, true},
      {"thm8_mean", QDomain::real_ge2, true},
      {"thm9", QDomain::int_ge2, true},
      {"thm10_plus", QDomain::int_ge2, true},
      {"thm10_minus", QDomain::real_ge2, true},
      {"thm11", QDomain::real_ge2, true},
      {"thm12_first", QDomain::real_ge2, false},
      {"thm12_second", QDomain::real_ge2, false},
      {"lemma7", QDomain::none, false},
      {"lemma8", QDomain::none, false},
      {"thm13_upper", QDomain::real_ge2, true},
      {"thm13_lower", QDomain::real_ge2, true},
      {"thm14", QDomain::real_ge2, false},
      {"thm14_relaxed", QDomain::real_ge2, false},
      {"cor4_tail", QDomain::none, false},
      {"cor5", QDomain::real_ge2, false},
      {"cor5_chain", QDomain::none, false},
      {"thm15", QDomain::real_ge2, true},
      {"thm15_tail", QDomain::none, false},
      {"tri_em1", QDomain::none, true},
      {"tri_m1", QDomain::int_ge1, true},
      {"tri_good", QDomain::real_ge2, true},
      {"user_rhs", QDomain::real_ge1, true},
  };
  return reg;
}

inline const TheoremInfo* find_theorem(const std::string& id) {
  for (const auto& t : theorem_registry())
    if (id == t.id) return &t;
  return nullptr;
}

struct CheckSpec {
  std::string theorem;
  std::vector<double> qs;
  double theta = 1.0;
  double a_self = 1.0;
  bool has_g = false;
  double g0 = 0.0, g1 = 0.0;  // cor2: g(z) = g0 + g1 z, g1 >= 0
  enum class WRule { none, constant, max_coord, max_abs_coord, vz_ratio } w_rule = WRule::none;
  double w_value = 1.0;
  bool mc = false;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;
  std::vector<double> t_grid;  // tail checks; default derived at run time
  double lambda = 16.0;        // lemma8
  double user_rhs = 0.0;       // user_rhs pinning value
  std::string side = "plus";   // user_rhs: plus | minus | norm
};

struct FunctionalSpec {
  std::string id;  // sum_weights | sup_linear | chaos | boolean | ep_class |
                   // cond_rademacher | user_table | triangle
  std::vector<double> weights;
  std::vector<std::vector<double>> vectors;
  std::size_t d = 0;
  std::vector<SparseTensor> tensors;
  std::vector<std::vector<std::vector<double>>> tables;
  bool centered = false;
  std::vector<double> values;  // user_table
  std::size_t n_vertices = 0;  // triangle
  std::string variant;         // triangle: count | good | m1
};

struct ReductionSpec {
  enum class Kind { drop_to_infimum, baseline, native_drop } kind = Kind::native_drop;
  std::vector<double> baseline{0.0};
};

struct Scenario {
  std::string name;
  ProductSpace space;
  FunctionalSpec functional;
  ReductionSpec reduction;
  std::vector<CheckSpec> checks;
};

namespace detail {

using json = nlohmann::json;

inline const json& field(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
  return j.at(key);
}

inline double num(const json& j, const std::string& ctx, const char* key) {
  const json& v = field(j, ctx, key);
  if (!v.is_number()) throw ParseError(ctx + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::string str(const json& j, const std::string& ctx, const char* key) {
  const json& v = field(j, ctx, key);
  if (!v.is_string()) throw ParseError(ctx + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> num_list(const json& v, const std::string& ctx) {
  if (!v.is_array()) throw ParseError(ctx + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(ctx + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline ProductSpace parse_space(const json& j) {
  const std::string ctx = "space";
  if (j.contains("kind")) {
    const std::string kind = str(j, ctx, "kind");
    if (kind == "rademacher") {
      const double n = num(j, ctx, "n");
      if (n < 1 || n != std::floor(n)) throw ParseError("space.n: expected a positive integer");
      return rademacher(static_cast<std::size_t>(n));
    }
    if (kind == "bernoulli") {
      const double n = num(j, ctx, "n");
      if (n < 1 || n != std::floor(n)) throw ParseError("space.n: expected a positive integer");
      return bernoulli(static_cast<std::size_t>(n), num(j, ctx, "p"));
    }
    throw ParseError("space.kind: unknown kind '" + kind + "'");
  }
  const json& ms = field(j, ctx, "marginals");
  if (!ms.is_array() || ms.empty()) throw ParseError("space.marginals: expected a nonempty array");
  std::vector<Marginal> marginals;
  std::size_t idx = 0;
  for (const auto& m : ms) {
    const std::string mctx = "space.marginals[" + std::to_string(idx++) + "]";
    try {
      if (m.contains("sampler")) {
        const std::string fam = str(m, mctx, "sampler");
        if (fam == "uniform")
          marginals.push_back(Marginal::uniform(num(m, mctx, "a"), num(m, mctx, "b")));
        else if (fam == "gaussian")
          marginals.push_back(Marginal::gaussian(num(m, mctx, "mu"), num(m, mctx, "sigma")));
        else
          throw ParseError(mctx + ".sampler: unknown family '" + fam + "'");
      } else {
        marginals.push_back(
            Marginal::finite_support(num_list(field(m, mctx, "support"), mctx + ".support"),
                                     num_list(field(m, mctx, "probs"), mctx + ".probs")));
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(mctx + ": " + e.what());
    }
  }
  try {
    return build_space(std::move(marginals));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("space: ") + e.what());
  }
}

inline FunctionalSpec parse_functional(const json& j) {
  const std::string ctx = "functional";
  FunctionalSpec f;
  f.id = str(j, ctx, "id");
  if (f.id == "sum_weights") {
    f.weights = num_list(field(j, ctx, "weights"), ctx + ".weights");
    if (f.weights.empty()) throw ParseError("functional.weights: empty");
  } else if (f.id == "sup_linear") {
    const json& vs = field(j, ctx, "vectors");
    if (!vs.is_array() || vs.empty()) throw ParseError("functional.vectors: expected arrays");
    for (const auto& v : vs) f.vectors.push_back(num_list(v, ctx + ".vectors[]"));
  } else if (f.id == "chaos" || f.id == "boolean") {
    const double d = num(j, ctx, "d");
    if (d < 1 || d != std::floor(d)) throw ParseError("functional.d: expected a positive integer");
    f.d = static_cast<std::size_t>(d);
    const json& ts = field(j, ctx, "tensors");
    if (!ts.is_array() || ts.empty()) throw ParseError("functional.tensors: expected arrays");
    for (const auto& t : ts) {
      SparseTensor st;
      if (!t.is_array()) throw ParseError("functional.tensors[]: expected entry arrays");
      for (const auto& e : t) {
        TensorEntry te;
        for (double v : num_list(field(e, ctx + ".tensors[][]", "set"), ctx + ".set")) {
          if (v < 0 || v != std::floor(v)) throw ParseError("functional.set: expected indices");
          te.set.push_back(static_cast<std::uint32_t>(v));
        }
        te.coeff = num(e, ctx + ".tensors[][]", "coeff");
        st.push_back(std::move(te));
      }
      f.tensors.push_back(std::move(st));
    }
  } else if (f.id == "ep_class" || f.id == "cond_rademacher") {
    const json& ts = field(j, ctx, "tables");
    if (!ts.is_array() || ts.empty()) throw ParseError("functional.tables: expected arrays");
    for (const auto& t : ts) {
      std::vector<std::vector<double>> table;
      if (!t.is_array()) throw ParseError("functional.tables[]: expected per-coordinate arrays");
      for (const auto& col : t) table.push_back(num_list(col, ctx + ".tables[][]"));
      f.tables.push_back(std::move(table));
    }
    if (j.contains("centered")) {
      if (!j.at("centered").is_boolean()) throw ParseError("functional.centered: expected a bool");
      f.centered = j.at("centered").get<bool>();
    }
  } else if (f.id == "user_table") {
    f.values = num_list(field(j, ctx, "values"), ctx + ".values");
    if (f.values.empty()) throw ParseError("functional.values: empty");
  } else if (f.id == "triangle") {
    const double nv = num(j, ctx, "n_vertices");
    if (nv < 3 || nv != std::floor(nv))
      throw ParseError("functional.n_vertices: expected an integer >= 3");
    f.n_vertices = static_cast<std::size_t>(nv);
    f.variant = j.contains("variant") ? str(j, ctx, "variant") : "count";
    if (f.variant != "count" && f.variant != "good" && f.variant != "m1")
      throw ParseError("functional.variant: expected count | good | m1");
  } else {
    throw ParseError("functional.id: unknown id '" + f.id + "'");
  }
  return f;
}

inline ReductionSpec parse_reduction(const json& j) {
  ReductionSpec r;
  if (j.is_null()) return r;
  const std::string kind = str(j, "reduction", "kind");
  if (kind == "drop_to_infimum") {
    r.kind = ReductionSpec::Kind::drop_to_infimum;
  } else if (kind == "baseline") {
    r.kind = ReductionSpec::Kind::baseline;
    r.baseline = num_list(field(j, "reduction", "values"), "reduction.values");
    if (r.baseline.empty()) throw ParseError("reduction.values: empty");
  } else if (kind == "native_drop") {
    r.kind = ReductionSpec::Kind::native_drop;
  } else {
    throw ParseError("reduction.kind: unknown kind '" + kind + "'");
  }
  return r;
}

inline void validate_q(double q, QDomain dom, const std::string& ctx) {
  switch (dom) {
    case QDomain::real_ge1:
      if (!(q >= 1.0)) throw ParseError(ctx + ": requires q >= 1");
      return;
    case QDomain::real_ge2:
      if (!(q >= 2.0)) throw ParseError(ctx + ": requires q >= 2");
      return;
    case QDomain::int_ge1:
      if (!(q >= 1.0) || q != std::floor(q))
        throw ParseError(ctx + ": requires integer q >= 1");
      return;
    case QDomain::int_ge2:
      if (!(q >= 2.0) || q != std::floor(q))
        throw ParseError(ctx + ": requires integer q >= 2");
      return;
    case QDomain::none:
      throw ParseError(ctx + ": this check takes no q list");
  }
}

inline CheckSpec parse_check(const json& j, std::size_t idx) {
  const std::string ctx = "checks[" + std::to_string(idx) + "]";
  CheckSpec c;
  c.theorem = str(j, ctx, "theorem");
  const TheoremInfo* info = find_theorem(c.theorem);
  if (!info) throw ParseError(ctx + ".theorem: unknown theorem id '" + c.theorem + "'");
  if (j.contains("q")) {
    c.qs = num_list(j.at("q"), ctx + ".q");
    for (double q : c.qs) validate_q(q, info->qdom, ctx + ".q");
  }
  if (info->qdom != QDomain::none && c.qs.empty())
    throw ParseError(ctx + ": theorem '" + c.theorem + "' needs a q list");
  if (j.contains("theta")) {
    c.theta = num(j, ctx, "theta");
    if (!(c.theta > 0.0 && c.theta <= 1.0)) throw ParseError(ctx + ".theta: must lie in (0, 1]");
  }
  if (j.contains("A")) {
    c.a_self = num(j, ctx, "A");
    if (!(c.a_self >= 1.0)) throw ParseError(ctx + ".A: must be >= 1");
  }
  if (j.contains("g")) {
    const json& g = j.at("g");
    c.has_g = true;
    c.g0 = num(g, ctx + ".g", "g0");
    c.g1 = g.contains("g1") ? num(g, ctx + ".g", "g1") : 0.0;
    if (c.g1 < 0.0) throw ParseError(ctx + ".g.g1: slope must be >= 0 (g nondecreasing)");
  }
  if (j.contains("w_rule")) {
    const std::string w = str(j, ctx, "w_rule");
    if (w == "constant") c.w_rule = CheckSpec::WRule::constant;
    else if (w == "max_coord") c.w_rule = CheckSpec::WRule::max_coord;
    else if (w == "max_abs_coord") c.w_rule = CheckSpec::WRule::max_abs_coord;
    else if (w == "vz_ratio") c.w_rule = CheckSpec::WRule::vz_ratio;
    else throw ParseError(ctx + ".w_rule: unknown rule '" + w + "'");
    if (j.contains("w_value")) c.w_value = num(j, ctx, "w_value");
  }
  if (j.contains("mode")) {
    const json& m = j.at("mode");
    if (m.is_string()) {
      if (m.get<std::string>() != "exact")
        throw ParseError(ctx + ".mode: expected \"exact\" or {\"mc\": {...}}");
    } else {
      const json& mc = field(m, ctx + ".mode", "mc");
      c.mc = true;
      if (mc.contains("seed")) c.seed = static_cast<std::uint64_t>(num(mc, ctx + ".mode.mc", "seed"));
      if (mc.contains("samples"))
        c.samples = static_cast<std::uint64_t>(num(mc, ctx + ".mode.mc", "samples"));
      if (c.samples < 100) throw ParseError(ctx + ".mode.mc.samples: must be >= 100");
      if (!info->mc_supported)
        throw ParseError(ctx + ": theorem '" + c.theorem + "' supports exact mode only");
    }
  }
  if (j.contains("t")) {
    c.t_grid = num_list(j.at("t"), ctx + ".t");
    for (double t : c.t_grid)
      if (!(t > 0.0)) throw ParseError(ctx + ".t: entries must be positive");
  }
  if (j.contains("lambda")) {
    c.lambda = num(j, ctx, "lambda");
    if (!(c.lambda > 4.0)) throw ParseError(ctx + ".lambda: must be > 4");
  }
  if (c.theorem == "user_rhs") {
    c.user_rhs = num(j, ctx, "rhs");
    if (j.contains("side")) {
      c.side = str(j, ctx, "side");
      if (c.side != "plus" && c.side != "minus" && c.side != "norm")
        throw ParseError(ctx + ".side: expected plus | minus | norm");
    }
  }
  return c;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
  }
  Scenario s;
  s.name = detail::str(j, "scenario", "name");
  s.space = detail::parse_space(detail::field(j, "scenario", "space"));
  s.functional = detail::parse_functional(detail::field(j, "scenario", "functional"));
  s.reduction = j.contains("reduction") ? detail::parse_reduction(j.at("reduction"))
                                        : ReductionSpec{};
  const auto& cs = detail::field(j, "scenario", "checks");
  if (!cs.is_array() || cs.empty()) throw ParseError("checks: expected a nonempty array");
  std::size_t idx = 0;
  for (const auto& c : cs) s.checks.push_back(detail::parse_check(c, idx++));
  return s;
}

}  // namespace momineq

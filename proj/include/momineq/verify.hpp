#pragma once

// Turns a parsed scenario into report rows: builds the functional from the
// registry, computes the exact (or Monte Carlo) left-hand side and the
// theorem's right-hand side, validates the theorem's hypotheses pointwise on
// the enumerated space, and scores each row.
//
// Exact rows assert lhs <= rhs + 1e-8 and can fail. Monte Carlo rows assert
// lhs + ci <= rhs and otherwise report not_asserted; a one-sided CI overlap
// is evidence, not refutation, so MC never fails. Hypothesis violations and
// resource limits surface as per-row statuses instead of aborting the run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "momineq/bounds.hpp"
#include "momineq/classical_apps.hpp"
#include "momineq/increments.hpp"
#include "momineq/phi_entropy.hpp"
#include "momineq/polynomial_apps.hpp"
#include "momineq/product_space.hpp"
#include "momineq/report.hpp"
#include "momineq/scenario.hpp"

namespace momineq {

inline constexpr double kExactTol = 1e-8;
inline constexpr double kHypTol = 1e-10;

struct BuiltFunctional {
  enum class Family {
    sum_weights,
    sup_linear,
    chaos,
    boolean_poly,
    cond_rademacher,
    ep_class,
    user_table,
    triangle_count,
    triangle_good,
    triangle_m1
  } family = Family::sum_weights;
  Functional fn;
  std::vector<double> weights;
  std::vector<std::vector<double>> vectors;
  ChaosSpec chaos;
  bool has_chaos = false;
  FunctionClass fclass;
  bool has_class = false;
  TriangleScenario tri;
  bool has_tri = false;
};

namespace detail {

inline void apply_reduction(Functional& fn, const ReductionSpec& red, bool has_native) {
  switch (red.kind) {
    case ReductionSpec::Kind::drop_to_infimum:
      fn.reduction = ReductionRule::drop_to_infimum();
      return;
    case ReductionSpec::Kind::baseline:
      fn.reduction = ReductionRule::baseline(red.baseline);
      return;
    case ReductionSpec::Kind::native_drop:
      if (!has_native) fn.reduction = ReductionRule::drop_to_infimum();
      return;
  }
}

}  // namespace detail

inline BuiltFunctional build_functional(const Scenario& sc) {
  const ProductSpace& space = sc.space;
  const FunctionalSpec& fs = sc.functional;
  BuiltFunctional bf;
  bool has_native = true;

  if (fs.id == "sum_weights") {
    if (fs.weights.size() != space.n())
      throw std::invalid_argument("sum_weights: weight count != coordinate count");
    bf.family = BuiltFunctional::Family::sum_weights;
    bf.weights = fs.weights;
    auto w = std::make_shared<std::vector<double>>(fs.weights);
    bf.fn.eval = [w](const Configuration& c) {
      double s = 0.0;
      for (std::size_t i = 0; i < c.values.size(); ++i) s += (*w)[i] * c.values[i];
      return s;
    };
    bf.fn.reduction = ReductionRule::user([w](std::size_t i, const Configuration& c) {
      double s = 0.0;
      for (std::size_t j = 0; j < c.values.size(); ++j)
        if (j != i) s += (*w)[j] * c.values[j];
      return s;
    });
  } else if (fs.id == "sup_linear") {
    for (const auto& v : fs.vectors)
      if (v.size() != space.n())
        throw std::invalid_argument("sup_linear: vector length != coordinate count");
    bf.family = BuiltFunctional::Family::sup_linear;
    bf.vectors = fs.vectors;
    auto vs = std::make_shared<std::vector<std::vector<double>>>(fs.vectors);
    auto sup_eval = [vs](const Configuration& c, std::size_t drop) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& t : *vs) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.values.size(); ++i)
          if (i != drop) s += t[i] * c.values[i];
        best = std::max(best, s);
      }
      return best;
    };
    bf.fn.eval = [sup_eval](const Configuration& c) { return sup_eval(c, Configuration::npos); };
    bf.fn.reduction = ReductionRule::user(
        [sup_eval](std::size_t i, const Configuration& c) { return sup_eval(c, i); });
  } else if (fs.id == "chaos" || fs.id == "boolean") {
    bf.family = fs.id == "chaos" ? BuiltFunctional::Family::chaos
                                 : BuiltFunctional::Family::boolean_poly;
    bf.chaos = make_chaos(space.n(), fs.d, fs.tensors, fs.id == "boolean");
    bf.has_chaos = true;
    bf.fn = chaos_functional(bf.chaos);
  } else if (fs.id == "ep_class") {
    bf.family = BuiltFunctional::Family::ep_class;
    bf.fclass.tables = fs.tables;
    bf.fclass.centered = fs.centered;
    bf.fclass.validate(space);
    bf.has_class = true;
    bf.fn = ep_functional(bf.fclass);
  } else if (fs.id == "cond_rademacher") {
    bf.family = BuiltFunctional::Family::cond_rademacher;
    bf.fclass.tables = fs.tables;
    bf.fclass.centered = false;
    bf.fclass.validate(space);
    bf.has_class = true;
    const FunctionClass fc = bf.fclass;
    const ProductSpace* sp = &space;
    bf.fn.eval = [sp, fc](const Configuration& c) {
      return conditional_rademacher_value(*sp, fc, c);
    };
    bf.fn.reduction = ReductionRule::user([sp, fc](std::size_t i, const Configuration& c) {
      return conditional_rademacher_value(*sp, fc, c, i);
    });
  } else if (fs.id == "user_table") {
    bf.family = BuiltFunctional::Family::user_table;
    const std::uint64_t total = space.enumerable_size();
    if (fs.values.size() != total)
      throw std::invalid_argument("user_table: needs one value per configuration (" +
                                  std::to_string(total) + ")");
    auto table = std::make_shared<std::vector<double>>(fs.values);
    std::vector<std::size_t> sizes;
    for (const auto& m : space.marginals) sizes.push_back(m.support.size());
    auto sz = std::make_shared<std::vector<std::size_t>>(std::move(sizes));
    bf.fn.eval = [table, sz](const Configuration& c) {
      std::uint64_t flat = 0;
      for (std::size_t i = 0; i < c.indices.size(); ++i) {
        if (c.indices[i] == Configuration::npos)
          throw std::invalid_argument("user_table: configuration outside the support grid");
        flat = flat * (*sz)[i] + c.indices[i];
      }
      return (*table)[flat];
    };
    has_native = false;
  } else if (fs.id == "triangle") {
    bf.tri = triangle_scenario(fs.n_vertices, 0.5);
    if (space.n() != bf.tri.n_edges())
      throw std::invalid_argument("triangle: space must have n(n-1)/2 bernoulli coordinates");
    double p = -1.0;
    for (const auto& m : space.marginals) {
      if (!m.is_finite() || m.support != std::vector<double>{0.0, 1.0})
        throw std::invalid_argument("triangle: edge coordinates must be bernoulli");
      if (p < 0.0) p = m.probs[1];
      else if (std::abs(p - m.probs[1]) > 1e-12)
        throw std::invalid_argument("triangle: edge probabilities must match");
    }
    bf.tri.p = p;
    bf.has_tri = true;
    if (fs.variant == "count") {
      bf.family = BuiltFunctional::Family::triangle_count;
      bf.chaos = bf.tri.spec();
      bf.has_chaos = true;
      bf.fn = chaos_functional(bf.chaos);
    } else if (fs.variant == "good") {
      bf.family = BuiltFunctional::Family::triangle_good;
      bf.fn = bf.tri.good_functional();
    } else {
      bf.family = BuiltFunctional::Family::triangle_m1;
      bf.fn = bf.tri.m1_functional();
    }
  } else {
    throw std::invalid_argument("unknown functional id: " + fs.id);
  }

  detail::apply_reduction(bf.fn, sc.reduction, has_native);
  return bf;
}

// Lazily computed exact quantities of one scenario.
struct ScenarioContext {
  const ProductSpace& space;
  BuiltFunctional bf;

  explicit ScenarioContext(const Scenario& sc) : space(sc.space), bf(build_functional(sc)) {}

  static constexpr std::uint64_t kProfileCacheMax = std::uint64_t(1) << 20;

  std::uint64_t total = 0;
  bool profiles_ready = false;
  std::vector<IncrementProfile> prof;
  bool ez_ready = false;
  double ez_value = 0.0;
  std::map<std::pair<int, double>, double> norm_memo;
  bool hyp_ready = false;
  double hyp_red_min = 0.0, hyp_m_red_max = 0.0, hyp_min_z = 0.0, hyp_max_selfsum_gap = 0.0;

  void ensure_enumerable() {
    if (total == 0) total = space.enumerable_size();
  }

  void ensure_profiles() {
    ensure_enumerable();
    if (profiles_ready || total > kProfileCacheMax) return;
    prof.resize(total);
    const std::uint64_t nblocks = (total + kReduceBlock - 1) / kReduceBlock;
    run_blocks(nblocks, [&](std::uint64_t b) {
      Configuration c;
      double w;
      const std::uint64_t end = std::min(total, (b + 1) * kReduceBlock);
      for (std::uint64_t flat = b * kReduceBlock; flat < end; ++flat) {
        decode_config(space, flat, c, &w);
        prof[flat] = profile_at(space, bf.fn, c);
      }
    });
    profiles_ready = true;
  }

  // blockwise reduce with the profile supplied from the cache when available
  template <class Fn>
  std::vector<double> reduce(std::size_t width, bool needs_profile, Fn&& fn) {
    ensure_enumerable();
    if (needs_profile) ensure_profiles();
    const std::uint64_t nblocks = (total + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partials(nblocks * width, 0.0);
    run_blocks(nblocks, [&](std::uint64_t b) {
      std::span<double> acc(partials.data() + b * width, width);
      Configuration c;
      double w;
      IncrementProfile local;
      const std::uint64_t end = std::min(total, (b + 1) * kReduceBlock);
      for (std::uint64_t flat = b * kReduceBlock; flat < end; ++flat) {
        decode_config(space, flat, c, &w);
        const IncrementProfile* p = nullptr;
        if (needs_profile) {
          if (profiles_ready) {
            p = &prof[flat];
          } else {
            local = profile_at(space, bf.fn, c);
            p = &local;
          }
        }
        fn(c, p, w, acc);
      }
    });
    std::vector<double> out(width, 0.0);
    for (std::uint64_t b = 0; b < nblocks; ++b)
      for (std::size_t k = 0; k < width; ++k) out[k] += partials[b * width + k];
    return out;
  }

  double ez() {
    if (!ez_ready) {
      ez_value = reduce(1, false, [&](const Configuration& c, const IncrementProfile*, double w,
                                      std::span<double> a) { a[0] += w * bf.fn.eval(c); })[0];
      ez_ready = true;
    }
    return ez_value;
  }

  double variance() {
    const double m = ez();
    auto s = reduce(1, false, [&](const Configuration& c, const IncrementProfile*, double w,
                                  std::span<double> a) {
      const double z = bf.fn.eval(c);
      a[0] += w * (z - m) * (z - m);
    });
    return s[0];
  }

  double norm(QuantitySpec::Kind kind, double r) {
    const auto key = std::make_pair(static_cast<int>(kind), r);
    auto it = norm_memo.find(key);
    if (it != norm_memo.end()) return it->second;
    const QuantitySpec qs = QuantitySpec::of(kind);
    const double m = qs.centered() ? ez() : 0.0;
    const bool needs_prof = qs.needs_profile();
    auto s = reduce(1, needs_prof, [&](const Configuration& c, const IncrementProfile* p, double w,
                                       std::span<double> a) {
      IncrementProfile zp;
      if (!needs_prof) zp.z = bf.fn.eval(c);
      a[0] += w * std::pow(std::abs(qs.value_of(c, needs_prof ? *p : zp, m)), r);
    });
    const double v = std::pow(s[0], 1.0 / r);
    norm_memo[key] = v;
    return v;
  }

  double ess_sup(QuantitySpec::Kind kind) {
    ensure_profiles();
    ensure_enumerable();
    const QuantitySpec qs = QuantitySpec::of(kind);
    double best = -std::numeric_limits<double>::infinity();
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(space, flat, c, &w);
      if (w == 0.0) continue;
      const IncrementProfile p = profiles_ready ? prof[flat] : profile_at(space, bf.fn, c);
      best = std::max(best, qs.value_of(c, p, 0.0));
    }
    return best;
  }

  // pointwise hypothesis statistics over the enumerated support
  void ensure_hypothesis() {
    if (hyp_ready) return;
    ensure_profiles();
    ensure_enumerable();
    hyp_red_min = std::numeric_limits<double>::infinity();
    hyp_m_red_max = -std::numeric_limits<double>::infinity();
    hyp_min_z = std::numeric_limits<double>::infinity();
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(space, flat, c, &w);
      if (w == 0.0) continue;
      const IncrementProfile p = profiles_ready ? prof[flat] : profile_at(space, bf.fn, c);
      hyp_red_min = std::min(hyp_red_min, p.red_min);
      hyp_m_red_max = std::max(hyp_m_red_max, p.m_reduced);
      hyp_min_z = std::min(hyp_min_z, p.z);
    }
    hyp_ready = true;
  }

  // max over configurations of sum_i (Z - Z_i) - A Z
  double selfbound_gap(double a_self) {
    ensure_profiles();
    ensure_enumerable();
    double worst = -std::numeric_limits<double>::infinity();
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(space, flat, c, &w);
      if (w == 0.0) continue;
      const IncrementProfile p = profiles_ready ? prof[flat] : profile_at(space, bf.fn, c);
      worst = std::max(worst, p.red_sum - a_self * p.z);
    }
    return worst;
  }

  double w_rule_value(const CheckSpec& ck, const Configuration& c, const IncrementProfile& p) {
    switch (ck.w_rule) {
      case CheckSpec::WRule::constant:
        return ck.w_value;
      case CheckSpec::WRule::max_coord: {
        double m = -std::numeric_limits<double>::infinity();
        for (double v : c.values) m = std::max(m, v);
        return m;
      }
      case CheckSpec::WRule::max_abs_coord: {
        double m = 0.0;
        for (double v : c.values) m = std::max(m, std::abs(v));
        return m;
      }
      case CheckSpec::WRule::vz_ratio:
        return p.z > kHypTol ? p.v / p.z : 0.0;
      case CheckSpec::WRule::none:
        break;
    }
    throw std::invalid_argument(ck.theorem + ": needs a w_rule");
  }

  // exact ||W||_q and the worst pointwise violation of V <= W Z
  std::pair<double, double> w_rule_norm_and_gap(const CheckSpec& ck, double q) {
    auto s = reduce(1, true, [&](const Configuration& c, const IncrementProfile* p, double w,
                                 std::span<double> a) {
      a[0] += w * std::pow(std::abs(w_rule_value(ck, c, *p)), q);
    });
    double worst = -std::numeric_limits<double>::infinity();
    ensure_profiles();
    ensure_enumerable();
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(space, flat, c, &w);
      if (w == 0.0) continue;
      const IncrementProfile p = profiles_ready ? prof[flat] : profile_at(space, bf.fn, c);
      worst = std::max(worst, p.v - w_rule_value(ck, c, p) * p.z);
    }
    return {std::pow(s[0], 1.0 / q), worst};
  }
};

namespace detail {

inline std::string qtag(double q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", q);
  return buf;
}

inline ReportRow score_row(const std::string& scen, const std::string& theorem, double qcol,
                           double lhs, double rhs, bool mc, double hw, bool asserted = true) {
  ReportRow r;
  r.check_id = scen + ":" + theorem + ":" + qtag(qcol);
  r.theorem = theorem;
  r.q = qcol;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.method = mc ? "mc" : "exact";
  r.ci_halfwidth = hw;
  if (!asserted) {
    r.status = "not_asserted";
  } else if (mc) {
    r.status = lhs + hw <= rhs ? "pass" : "not_asserted";
  } else {
    r.status = lhs <= rhs + kExactTol ? "pass" : "fail";
  }
  return r;
}

inline ReportRow error_row(const std::string& scen, const std::string& theorem,
                           const char* status) {
  ReportRow r;
  r.check_id = scen + ":" + theorem + ":0";
  r.theorem = theorem;
  r.status = status;
  r.method = "none";
  return r;
}

inline double mc_quantity_norm(const ProductSpace& s, const Functional& f,
                               const QuantitySpec& qs, double r, const CheckSpec& ck,
                               unsigned tag) {
  return mc_norm(s, f, qs, r, rng::derive_seed(ck.seed, 100 + tag), ck.samples).value;
}

inline double mc_fn_mean(const ProductSpace& s, const Functional& f, const CheckSpec& ck,
                         unsigned tag) {
  return mc_mean(s, f, rng::derive_seed(ck.seed, 200 + tag), ck.samples).value;
}

}  // namespace detail

// One (lhs, hw) estimate of a norm of the scenario functional.
inline std::pair<double, double> lhs_norm(ScenarioContext& ctx, const CheckSpec& ck,
                                          QuantitySpec::Kind kind, double q) {
  if (!ck.mc) return {ctx.norm(kind, q), 0.0};
  auto e = mc_norm(ctx.space, ctx.bf.fn, QuantitySpec::of(kind), q, ck.seed, ck.samples);
  return {e.value, e.ci_halfwidth};
}

namespace detail {

// ---- per-theorem handlers ------------------------------------------------

inline void check_core_bounds(ScenarioContext& ctx, const std::string& scen, const CheckSpec& ck,
                              Report& rep) {
  const std::string& id = ck.theorem;
  for (double q : ck.qs) {
    BoundInputs in;
    in.q = q;
    QuantitySpec::Kind lhs_kind = QuantitySpec::Kind::z_plus;
    bool asserted = true;

    if (id == "thm1_plus" || id == "thm1_norm") {
      double cplus, cminus = 0.0;
      if (!ck.mc) {
        cplus = ctx.ess_sup(QuantitySpec::Kind::v_plus);
        if (id == "thm1_norm") cminus = ctx.ess_sup(QuantitySpec::Kind::v_minus);
      } else {
        // sample maximum: an underestimate of the essential sup, which only
        // makes the bound harder to pass
        double best_p = 0.0, best_m = 0.0;
        for (std::uint64_t j = 0; j < ck.samples; ++j) {
          const Configuration c = sample_config(ctx.space, rng::derive_seed(ck.seed, 7), j);
          const IncrementProfile p =
              profile_estimate(ctx.space, ctx.bf.fn, c, rng::derive_seed(ck.seed, 7), j, 64);
          best_p = std::max(best_p, p.v_plus);
          best_m = std::max(best_m, p.v_minus);
        }
        cplus = best_p;
        cminus = best_m;
      }
      in.c = id == "thm1_plus" ? cplus : std::max(cplus, cminus);
      if (id == "thm1_norm") {
        in.expectation_z = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
        lhs_kind = QuantitySpec::Kind::z;
      }
    } else if (id == "thm2_plus" || id == "thm2_plus_tight") {
      in.norm_vplus = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn,
                                               QuantitySpec::of(QuantitySpec::Kind::v_plus),
                                               0.5 * q, ck, 2)
                            : ctx.norm(QuantitySpec::Kind::v_plus, 0.5 * q);
    } else if (id == "thm2_minus" || id == "thm2_minus_tight") {
      lhs_kind = QuantitySpec::Kind::z_minus;
      in.norm_vminus = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn,
                                                QuantitySpec::of(QuantitySpec::Kind::v_minus),
                                                0.5 * q, ck, 3)
                             : ctx.norm(QuantitySpec::Kind::v_minus, 0.5 * q);
    } else if (id == "thm3") {
      if (!ck.mc) {
        ctx.ensure_hypothesis();
        if (ctx.hyp_red_min < -kHypTol) {
          rep.rows.push_back(error_row(scen, id, "rejected"));
          return;
        }
      }
      in.norm_v = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn,
                                           QuantitySpec::of(QuantitySpec::Kind::v), 0.5 * q, ck, 4)
                        : ctx.norm(QuantitySpec::Kind::v, 0.5 * q);
    } else if (id == "thm4_vplus") {
      lhs_kind = QuantitySpec::Kind::z_minus;
      if (!ck.mc) {
        in.norm_vplus = ctx.norm(QuantitySpec::Kind::v_plus, 0.5 * q);
        in.norm_m_q = ctx.norm(QuantitySpec::Kind::m_resampled, q);
      } else {
        in.norm_vplus = mc_quantity_norm(ctx.space, ctx.bf.fn,
                                         QuantitySpec::of(QuantitySpec::Kind::v_plus), 0.5 * q,
                                         ck, 5);
        in.norm_m_q = mc_quantity_norm(ctx.space, ctx.bf.fn,
                                       QuantitySpec::of(QuantitySpec::Kind::m_resampled), q, ck, 6);
      }
    } else if (id == "thm4_v") {
      lhs_kind = QuantitySpec::Kind::z_minus;
      if (!ck.mc) {
        ctx.ensure_hypothesis();
        if (ctx.hyp_red_min < -kHypTol) {
          rep.rows.push_back(error_row(scen, id, "rejected"));
          return;
        }
        in.norm_v = ctx.norm(QuantitySpec::Kind::v, 0.5 * q);
        in.norm_m_q = ctx.norm(QuantitySpec::Kind::m_reduced, q);
      } else {
        in.norm_v = mc_quantity_norm(ctx.space, ctx.bf.fn,
                                     QuantitySpec::of(QuantitySpec::Kind::v), 0.5 * q, ck, 5);
        in.norm_m_q = mc_quantity_norm(ctx.space, ctx.bf.fn,
                                       QuantitySpec::of(QuantitySpec::Kind::m_reduced), q, ck, 6);
      }
    } else if (id == "cor1_mean" || id == "cor1_plus" || id == "cor1_minus") {
      if (!ck.mc) {
        ctx.ensure_hypothesis();
        if (ctx.hyp_red_min < -kHypTol || ctx.hyp_m_red_max > 1.0 + kHypTol ||
            ctx.hyp_min_z < -kHypTol || ctx.selfbound_gap(ck.a_self) > kHypTol) {
          rep.rows.push_back(error_row(scen, id, "rejected"));
          return;
        }
      }
      in.a_self = ck.a_self;
      in.expectation_z = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
      lhs_kind = id == "cor1_mean" ? QuantitySpec::Kind::z
               : id == "cor1_plus" ? QuantitySpec::Kind::z_plus
                                   : QuantitySpec::Kind::z_minus;
    } else if (id == "cor2") {
      if (!ck.has_g) {
        rep.rows.push_back(error_row(scen, id, "rejected"));
        return;
      }
      lhs_kind = QuantitySpec::Kind::z_minus;
      const double mean_z = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
      if (!ck.mc) {
        // pointwise dominance V- <= g(Z)
        ctx.ensure_profiles();
        ctx.ensure_enumerable();
        Configuration c;
        double w;
        bool ok = true;
        for (std::uint64_t flat = 0; flat < ctx.total && ok; ++flat) {
          decode_config(ctx.space, flat, c, &w);
          if (w == 0.0) continue;
          const IncrementProfile p =
              ctx.profiles_ready ? ctx.prof[flat] : profile_at(ctx.space, ctx.bf.fn, c);
          if (p.v_minus > ck.g0 + ck.g1 * p.z + kHypTol) ok = false;
        }
        if (!ok) {
          rep.rows.push_back(error_row(scen, id, "rejected"));
          return;
        }
      }
      in.c = ck.g0 + ck.g1 * mean_z;  // E[g(Z)] for affine g
    } else if (id == "cor3_mean" || id == "cor3_plus" || id == "cor3_minus") {
      if (ck.w_rule == CheckSpec::WRule::none) {
        rep.rows.push_back(error_row(scen, id, "rejected"));
        return;
      }
      in.theta = ck.theta;
      lhs_kind = id == "cor3_mean" ? QuantitySpec::Kind::z
               : id == "cor3_plus" ? QuantitySpec::Kind::z_plus
                                   : QuantitySpec::Kind::z_minus;
      if (!ck.mc) {
        ctx.ensure_hypothesis();
        auto [w_norm, vw_gap] = ctx.w_rule_norm_and_gap(ck, q);
        if (ctx.hyp_red_min < -kHypTol || vw_gap > kHypTol || ctx.hyp_min_z < -kHypTol) {
          rep.rows.push_back(error_row(scen, id, "rejected"));
          return;
        }
        in.norm_w_q = w_norm;
        in.expectation_z = ctx.ez();
        if (id == "cor3_minus") in.norm_m_q = ctx.norm(QuantitySpec::Kind::m_reduced, q);
      } else {
        QuantitySpec wq{QuantitySpec::Kind::user,
                        [&ctx, &ck](const Configuration& c, const IncrementProfile& p, double) {
                          return ctx.w_rule_value(ck, c, p);
                        }};
        in.norm_w_q = mc_quantity_norm(ctx.space, ctx.bf.fn, wq, q, ck, 8);
        in.expectation_z = mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1);
        if (id == "cor3_minus")
          in.norm_m_q = mc_quantity_norm(ctx.space, ctx.bf.fn,
                                         QuantitySpec::of(QuantitySpec::Kind::m_reduced), q, ck, 6);
      }
    } else {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }

    auto [lhs, hw] = lhs_norm(ctx, ck, lhs_kind, q);
    const double rhs = moment_bound(id, in).value;
    rep.rows.push_back(score_row(scen, id, q, lhs, rhs, ck.mc, hw, asserted));
  }
}

inline bool is_rademacher_space(const ProductSpace& s) {
  for (const auto& m : s.marginals) {
    if (!m.is_finite() || m.support != std::vector<double>{-1.0, 1.0}) return false;
    if (std::abs(m.probs[0] - 0.5) > 1e-12 || std::abs(m.probs[1] - 0.5) > 1e-12) return false;
  }
  return true;
}

inline bool has_centered_marginals(const ProductSpace& s) {
  for (const auto& m : s.marginals) {
    if (!m.is_finite()) return false;
    if (std::abs(m.mean()) > 1e-10) return false;
  }
  return true;
}

inline void check_classical(ScenarioContext& ctx, const std::string& scen, const CheckSpec& ck,
                            Report& rep) {
  const std::string& id = ck.theorem;
  using Family = BuiltFunctional::Family;
  const Family fam = ctx.bf.family;

  if (id == "thm7_pos" || id == "thm7_abs") {
    if (fam != Family::sum_weights || !is_rademacher_space(ctx.space)) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    for (double q : ck.qs) {
      const bool abs_norm = id == "thm7_abs";
      auto [lhs, hw] = lhs_norm(
          ctx, ck, abs_norm ? QuantitySpec::Kind::z : QuantitySpec::Kind::z_plus, q);
      const double rhs = khinchine_bound(ctx.bf.weights, q, abs_norm).value;
      rep.rows.push_back(score_row(scen, id, q, lhs, rhs, ck.mc, hw));
    }
    return;
  }
  if (id == "marcinkiewicz") {
    if (fam != Family::sum_weights || !has_centered_marginals(ctx.space)) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const auto weights = ctx.bf.weights;
    QuantitySpec sumsq{QuantitySpec::Kind::user,
                       [weights](const Configuration& c, const IncrementProfile&, double) {
                         double s = 0.0;
                         for (std::size_t i = 0; i < c.values.size(); ++i)
                           s += weights[i] * weights[i] * c.values[i] * c.values[i];
                         return s;
                       }};
    for (double q : ck.qs) {
      const double nss =
          ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn, sumsq, 0.5 * q, ck, 12)
                : exact_norm(ctx.space, ctx.bf.fn, sumsq, 0.5 * q).value;
      auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z, q);
      rep.rows.push_back(score_row(scen, id, q, lhs, marcinkiewicz_bound(q, nss), ck.mc, hw));
    }
    return;
  }
  if (id == "thm8_plus" || id == "thm8_minus" || id == "thm8_mean") {
    bool nonneg = fam == Family::sum_weights;
    if (nonneg)
      for (std::size_t i = 0; i < ctx.space.n(); ++i)
        for (double x : ctx.space.marginals[i].support)
          if (ctx.bf.weights[i] * x < 0.0) nonneg = false;
    if (!nonneg) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const auto weights = ctx.bf.weights;
    QuantitySpec maxq{QuantitySpec::Kind::user,
                      [weights](const Configuration& c, const IncrementProfile&, double) {
                        double m = -std::numeric_limits<double>::infinity();
                        for (std::size_t i = 0; i < c.values.size(); ++i)
                          m = std::max(m, weights[i] * c.values[i]);
                        return m;
                      }};
    SumStats st;
    for (std::size_t i = 0; i < ctx.space.n(); ++i)
      st.sum_mean_sq +=
          ctx.bf.weights[i] * ctx.bf.weights[i] * ctx.space.marginals[i].moment2();
    for (double q : ck.qs) {
      st.ez = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
      st.norm_max_q = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn, maxq, q, ck, 10)
                            : exact_norm(ctx.space, ctx.bf.fn, maxq, q).value;
      auto bounds = rosenthal_bounds(RosenthalKind::nonneg_thm8, st, q, ck.theta);
      const BoundResult& b = id == "thm8_plus" ? bounds[0]
                           : id == "thm8_minus" ? bounds[1]
                                                : bounds[2];
      QuantitySpec::Kind kind = id == "thm8_plus" ? QuantitySpec::Kind::z_plus
                              : id == "thm8_minus" ? QuantitySpec::Kind::z_minus
                                                   : QuantitySpec::Kind::z;
      auto [lhs, hw] = lhs_norm(ctx, ck, kind, q);
      rep.rows.push_back(score_row(scen, id, q, lhs, b.value, ck.mc, hw));
    }
    return;
  }
  if (id == "thm9") {
    if (fam != Family::sum_weights || !has_centered_marginals(ctx.space)) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const auto weights = ctx.bf.weights;
    QuantitySpec maxabs{QuantitySpec::Kind::user,
                        [weights](const Configuration& c, const IncrementProfile&, double) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < c.values.size(); ++i)
                            m = std::max(m, std::abs(weights[i] * c.values[i]));
                          return m;
                        }};
    SumStats st;
    double s2 = 0.0;
    for (std::size_t i = 0; i < ctx.space.n(); ++i)
      s2 += ctx.bf.weights[i] * ctx.bf.weights[i] * ctx.space.marginals[i].moment2();
    st.sigma = std::sqrt(s2);
    for (double q : ck.qs) {
      st.norm_max_abs_q = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn, maxabs, q, ck, 11)
                                : exact_norm(ctx.space, ctx.bf.fn, maxabs, q).value;
      auto bounds = rosenthal_bounds(RosenthalKind::centered_thm9, st, q, ck.theta);
      auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_plus, q);
      rep.rows.push_back(score_row(scen, id, q, lhs, bounds[0].value, ck.mc, hw));
    }
    return;
  }
  if (id == "thm10_plus" || id == "thm10_minus") {
    if (fam != Family::sup_linear || !is_rademacher_space(ctx.space)) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    double sup_l2 = 0.0, sup_entry = 0.0;
    for (const auto& t : ctx.bf.vectors) {
      double l2 = 0.0;
      for (double v : t) {
        l2 += v * v;
        sup_entry = std::max(sup_entry, std::abs(v));
      }
      sup_l2 = std::max(sup_l2, std::sqrt(l2));
    }
    for (double q : ck.qs) {
      if (id == "thm10_plus") {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_plus, q);
        rep.rows.push_back(score_row(scen, id, q, lhs, sup_linear_plus_bound(q, sup_l2).value,
                                     ck.mc, hw));
      } else {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_minus, q);
        rep.rows.push_back(score_row(
            scen, id, q, lhs, sup_linear_minus_bound(q, sup_l2, sup_entry).value, ck.mc, hw));
      }
    }
    return;
  }
  if (id == "thm11") {
    if (fam != Family::ep_class || ctx.bf.fclass.centered || !ctx.bf.fclass.nonnegative()) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const FunctionClass fc = ctx.bf.fclass;
    QuantitySpec env{QuantitySpec::Kind::user,
                     [fc](const Configuration& c, const IncrementProfile&, double) {
                       return fc.envelope(c);
                     }};
    for (double q : ck.qs) {
      const double ez = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
      const double mq = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn, env, q, ck, 13)
                              : exact_norm(ctx.space, ctx.bf.fn, env, q).value;
      auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z, q);
      rep.rows.push_back(
          score_row(scen, id, q, lhs, nonneg_class_norm_bound(q, ez, mq, ck.theta).value, ck.mc,
                    hw));
    }
    return;
  }
  if (id == "thm12_first" || id == "thm12_second") {
    if (fam != Family::ep_class || !ctx.bf.fclass.centered) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    for (double q : ck.qs) {
      const std::vector<double> qs{2.0, q};
      auto st = ep_stats_exact(ctx.space, ctx.bf.fclass, qs);
      if (id == "thm12_first") {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_plus, q);
        rep.rows.push_back(
            score_row(scen, id, q, lhs, ep_centered_plus_bound(q, st).value, ck.mc, hw));
      } else {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z, q);
        rep.rows.push_back(
            score_row(scen, id, q, lhs, ep_centered_norm_bound(q, st).value, ck.mc, hw));
      }
    }
    return;
  }
  if (id == "lemma7") {
    if (fam != Family::ep_class || !ctx.bf.fclass.centered) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    auto st = ep_stats_exact(ctx.space, ctx.bf.fclass, std::vector<double>{2.0});
    auto [lhs, rhs] = lemma7_check(st, st.m_norms.at(2.0) * st.m_norms.at(2.0));
    rep.rows.push_back(score_row(scen, id, 0.0, lhs, rhs, false, 0.0));
    return;
  }
  if (id == "lemma8") {
    if (fam != Family::ep_class || !ctx.bf.fclass.centered) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    auto [lhs, rhs] = lemma8_check(ctx.space, ctx.bf.fclass, ck.lambda);
    rep.rows.push_back(score_row(scen, id, 0.0, lhs, rhs, false, 0.0));
    return;
  }
  if (id == "thm13_upper" || id == "thm13_lower") {
    if (fam != Family::cond_rademacher) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const FunctionClass fc = ctx.bf.fclass;
    QuantitySpec env{QuantitySpec::Kind::user,
                     [fc](const Configuration& c, const IncrementProfile&, double) {
                       return fc.envelope(c);
                     }};
    for (double q : ck.qs) {
      const double ez = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
      const double mq = ck.mc ? mc_quantity_norm(ctx.space, ctx.bf.fn, env, q, ck, 13)
                              : exact_norm(ctx.space, ctx.bf.fn, env, q).value;
      auto [up, lo] = thm13_bounds(ez, mq, q);
      if (id == "thm13_upper") {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_plus, q);
        rep.rows.push_back(score_row(scen, id, q, lhs, up.value, ck.mc, hw));
      } else {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_minus, q);
        rep.rows.push_back(score_row(scen, id, q, lhs, lo.value, ck.mc, hw));
      }
    }
    return;
  }
  rep.rows.push_back(error_row(scen, id, "rejected"));
}

inline std::vector<double> default_tail_grid(ScenarioContext& ctx) {
  const double sigma = std::sqrt(std::max(ctx.variance(), 0.0));
  if (!(sigma > 0.0))
    throw std::invalid_argument("tail check: degenerate (constant) functional");
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.25 * sigma * static_cast<double>(k));
  return grid;
}

inline void check_polynomial(ScenarioContext& ctx, const std::string& scen, const CheckSpec& ck,
                             Report& rep) {
  const std::string& id = ck.theorem;
  using Family = BuiltFunctional::Family;
  const Family fam = ctx.bf.family;

  const bool is_chaos = fam == Family::chaos;
  const bool is_boolean = fam == Family::boolean_poly || fam == Family::triangle_count;

  if (id == "thm14" || id == "thm14_relaxed" || id == "cor4_tail" || id == "cor5" ||
      id == "cor5_chain") {
    if (!is_chaos || !is_rademacher_space(ctx.space)) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const ChaosSpec& spec = ctx.bf.chaos;
    const std::size_t d = spec.d;

    // E[W_j], the constant W_d and the certification state
    std::vector<double> ew(d, 0.0);
    bool certified = true;
    {
      auto sums = ctx.reduce(2 * d, false, [&](const Configuration& c, const IncrementProfile*,
                                               double w, std::span<double> a) {
        for (std::size_t j = 1; j <= d; ++j) {
          const WValue wv = chaos_W(spec, c, j);
          a[j - 1] += w * wv.value;
          a[d + j - 1] += wv.certified ? 0.0 : w;
        }
      });
      for (std::size_t j = 0; j < d; ++j) {
        ew[j] = sums[j];
        if (sums[d + j] > 0.0) certified = false;
      }
    }

    if (id == "thm14" || id == "thm14_relaxed") {
      Configuration c0;
      double w0;
      decode_config(ctx.space, 0, c0, &w0);
      const double wd = chaos_W(spec, c0, d).value;
      for (double q : ck.qs) {
        const double lhs = ctx.norm(QuantitySpec::Kind::z_plus, q);
        const double rhs = id == "thm14"
                               ? chaos_moment_bound_tight(q, ew, wd, d).value
                               : chaos_moment_bound_relaxed(q, ew, d).value;
        rep.rows.push_back(score_row(scen, id, q, lhs, rhs, false, 0.0, certified));
      }
      return;
    }
    if (id == "cor4_tail") {
      const std::vector<double> grid = ck.t_grid.empty() ? default_tail_grid(ctx) : ck.t_grid;
      const double ez = ctx.ez();
      auto tails = ctx.reduce(grid.size(), false, [&](const Configuration& c,
                                                      const IncrementProfile*, double w,
                                                      std::span<double> a) {
        const double z = ctx.bf.fn.eval(c);
        for (std::size_t k = 0; k < grid.size(); ++k)
          if (z >= ez + grid[k]) a[k] += w;
      });
      for (std::size_t k = 0; k < grid.size(); ++k)
        rep.rows.push_back(score_row(scen, id, grid[k], tails[k],
                                     chaos_tail(grid[k], ew, d), false, 0.0, certified));
      return;
    }
    if (id == "cor5") {
      const double n2 = ctx.norm(QuantitySpec::Kind::z, 2.0);
      for (double q : ck.qs) {
        const double lhs = ctx.norm(QuantitySpec::Kind::z, q);
        rep.rows.push_back(score_row(scen, id, q, lhs, bonami_bound(q, n2, d), false, 0.0));
      }
      return;
    }
    // cor5_chain: ||W_k||_2 <= sqrt(d) ||W_{k-1}||_2, W_0 = Z
    auto sq = ctx.reduce(d, false, [&](const Configuration& c, const IncrementProfile*, double w,
                                       std::span<double> a) {
      for (std::size_t j = 1; j <= d; ++j) {
        const double v = chaos_W(spec, c, j).value;
        a[j - 1] += w * v * v;
      }
    });
    double prev = ctx.norm(QuantitySpec::Kind::z, 2.0);
    for (std::size_t k = 1; k <= d; ++k) {
      const double cur = std::sqrt(sq[k - 1]);
      rep.rows.push_back(score_row(scen, id, static_cast<double>(k), cur,
                                   std::sqrt(static_cast<double>(d)) * prev, false, 0.0,
                                   k <= 2));
      prev = cur;
    }
    return;
  }

  if (id == "thm15" || id == "thm15_tail") {
    if (!is_boolean) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const ChaosSpec& spec = ctx.bf.chaos;
    const std::size_t d = spec.d;
    std::vector<double> em(d, 0.0);
    double ez;
    if (!ck.mc) {
      auto sums = ctx.reduce(d, false, [&](const Configuration& c, const IncrementProfile*,
                                           double w, std::span<double> a) {
        for (std::size_t k = 0; k < d; ++k) a[k] += w * boolean_M(spec, c, k);
      });
      for (std::size_t k = 0; k < d; ++k) em[k] = sums[k];
      ez = ctx.ez();
    } else {
      ez = mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1);
      for (std::size_t k = 0; k < d; ++k) {
        Functional mk;
        mk.eval = [spec, k](const Configuration& c) { return boolean_M(spec, c, k); };
        mk.reduction = ReductionRule::baseline({0.0});
        em[k] = mc_fn_mean(ctx.space, mk, ck, 20 + static_cast<unsigned>(k));
      }
    }
    if (id == "thm15") {
      for (double q : ck.qs) {
        auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_plus, q);
        rep.rows.push_back(
            score_row(scen, id, q, lhs, boolean_moment_bound(q, ez, em, d).value, ck.mc, hw));
      }
      return;
    }
    const std::vector<double> grid = ck.t_grid.empty() ? default_tail_grid(ctx) : ck.t_grid;
    auto tails = ctx.reduce(grid.size(), false, [&](const Configuration& c,
                                                    const IncrementProfile*, double w,
                                                    std::span<double> a) {
      const double z = ctx.bf.fn.eval(c);
      for (std::size_t k = 0; k < grid.size(); ++k)
        if (z >= ez + grid[k]) a[k] += w;
    });
    for (std::size_t k = 0; k < grid.size(); ++k)
      rep.rows.push_back(score_row(scen, id, grid[k], tails[k],
                                   boolean_tail(grid[k], ez, em, d), false, 0.0));
    return;
  }

  if (id == "tri_em1" || id == "tri_m1" || id == "tri_good") {
    if (!ctx.bf.has_tri) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    const TriangleScenario tri = ctx.bf.tri;
    if (id == "tri_good" && fam != Family::triangle_good) {
      rep.rows.push_back(error_row(scen, id, "rejected"));
      return;
    }
    Functional m1 = tri.m1_functional();
    if (id == "tri_em1") {
      double lhs, hw = 0.0;
      if (ck.mc) {
        auto e = mc_mean(ctx.space, m1, ck.seed, ck.samples);
        lhs = e.value;
        hw = e.ci_halfwidth;
      } else {
        lhs = exact_mean(ctx.space, m1);
      }
      rep.rows.push_back(score_row(scen, id, 0.0, lhs, tri.em1_formula(), ck.mc, hw));
      return;
    }
    if (id == "tri_m1") {
      const double em1 =
          ck.mc ? mc_mean(ctx.space, m1, rng::derive_seed(ck.seed, 31), ck.samples).value
                : exact_mean(ctx.space, m1);
      for (double q : ck.qs) {
        double lhs, hw = 0.0;
        if (ck.mc) {
          auto e = mc_norm(ctx.space, m1, QuantitySpec::of(QuantitySpec::Kind::z), q, ck.seed,
                           ck.samples);
          lhs = e.value;
          hw = e.ci_halfwidth;
        } else {
          lhs = exact_norm(ctx.space, m1, QuantitySpec::of(QuantitySpec::Kind::z), q).value;
        }
        rep.rows.push_back(score_row(scen, id, q, lhs,
                                     triangle_m1_moment_bound(tri.nv, q, em1), ck.mc, hw));
      }
      return;
    }
    // tri_good
    const double ezg = ck.mc ? mc_fn_mean(ctx.space, ctx.bf.fn, ck, 1) : ctx.ez();
    for (double q : ck.qs) {
      auto [lhs, hw] = lhs_norm(ctx, ck, QuantitySpec::Kind::z_plus, q);
      rep.rows.push_back(score_row(scen, id, q, lhs,
                                   triangle_good_bound(tri.nv, tri.p, q, ezg), ck.mc, hw));
    }
    return;
  }

  rep.rows.push_back(error_row(scen, id, "rejected"));
}

inline void check_user_rhs(ScenarioContext& ctx, const std::string& scen, const CheckSpec& ck,
                           Report& rep) {
  for (double q : ck.qs) {
    const QuantitySpec::Kind kind = ck.side == "plus" ? QuantitySpec::Kind::z_plus
                                  : ck.side == "minus" ? QuantitySpec::Kind::z_minus
                                                       : QuantitySpec::Kind::z;
    auto [lhs, hw] = lhs_norm(ctx, ck, kind, q);
    rep.rows.push_back(score_row(scen, "user_rhs", q, lhs, ck.user_rhs, ck.mc, hw));
  }
}

inline void run_check(ScenarioContext& ctx, const std::string& scen, const CheckSpec& ck,
                      Report& rep) {
  const std::string& id = ck.theorem;
  if (id.rfind("thm1_", 0) == 0 || id.rfind("thm2_", 0) == 0 || id == "thm3" ||
      id.rfind("thm4_", 0) == 0 || id.rfind("cor1_", 0) == 0 || id == "cor2" ||
      id.rfind("cor3_", 0) == 0) {
    check_core_bounds(ctx, scen, ck, rep);
    return;
  }
  if (id == "user_rhs") {
    check_user_rhs(ctx, scen, ck, rep);
    return;
  }
  if (id.rfind("thm14", 0) == 0 || id.rfind("cor4", 0) == 0 || id.rfind("cor5", 0) == 0 ||
      id.rfind("thm15", 0) == 0 || id.rfind("tri_", 0) == 0) {
    check_polynomial(ctx, scen, ck, rep);
    return;
  }
  check_classical(ctx, scen, ck, rep);
}

}  // namespace detail

inline Report execute(const Scenario& sc) {
  Report rep;
  ScenarioContext ctx(sc);
  for (const auto& ck : sc.checks) {
    try {
      detail::run_check(ctx, sc.name, ck, rep);
    } catch (const EnumerationUnavailable& e) {
      rep.rows.push_back(detail::error_row(sc.name, ck.theorem, "resource"));
      rep.notes.push_back(sc.name + ":" + ck.theorem + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      rep.rows.push_back(detail::error_row(sc.name, ck.theorem, "rejected"));
      rep.notes.push_back(sc.name + ":" + ck.theorem + ": " + e.what());
    }
  }
  return rep;
}

// A minimal scenario exercising the given theorem id; used by the coverage
// test and as copy-paste documentation.
inline std::string default_scenario_json(const std::string& id) {
  const std::string khinchine_space =
      R"("space": {"kind": "rademacher", "n": 4},
  "functional": {"id": "sum_weights", "weights": [1, 0.5, 1, 1]})";
  const std::string bern_sum_space =
      R"("space": {"kind": "bernoulli", "n": 5, "p": 0.4},
  "functional": {"id": "sum_weights", "weights": [1, 1, 1, 1, 1]})";
  auto wrap = [&](const std::string& body, const std::string& check) {
    return "{\n  \"name\": \"default_" + id + "\",\n  " + body + ",\n  \"checks\": [" + check +
           "]\n}\n";
  };

  if (id == "thm1_plus" || id == "thm1_norm" || id == "thm2_plus" || id == "thm2_plus_tight" ||
      id == "thm2_minus" || id == "thm2_minus_tight" || id == "thm4_vplus")
    return wrap(khinchine_space, "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  if (id == "thm7_pos" || id == "thm7_abs" || id == "marcinkiewicz" || id == "thm9")
    return wrap(khinchine_space, "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  if (id == "user_rhs")
    return wrap(khinchine_space,
                "{\"theorem\": \"user_rhs\", \"q\": [2], \"rhs\": 100.0, \"side\": \"plus\"}");
  if (id == "thm3" || id == "thm4_v" || id == "cor1_plus")
    return wrap(bern_sum_space, "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  if (id == "cor1_mean")
    return wrap(bern_sum_space, "{\"theorem\": \"cor1_mean\", \"q\": [1, 2, 3]}");
  if (id == "cor1_minus")
    return wrap(bern_sum_space, "{\"theorem\": \"cor1_minus\", \"q\": [2, 3]}");
  if (id == "cor2")
    return wrap(bern_sum_space, "{\"theorem\": \"cor2\", \"q\": [2, 3], \"g\": {\"g0\": 2.0}}");
  if (id == "cor3_mean" || id == "cor3_plus" || id == "cor3_minus")
    return wrap(bern_sum_space, "{\"theorem\": \"" + id +
                                    "\", \"q\": [2, 3], \"w_rule\": \"constant\", "
                                    "\"w_value\": 1.0, \"theta\": 1.0}");
  if (id == "thm8_plus" || id == "thm8_minus" || id == "thm8_mean")
    return wrap(bern_sum_space,
                "{\"theorem\": \"" + id + "\", \"q\": [2, 3], \"theta\": 0.5}");
  if (id == "thm10_plus" || id == "thm10_minus")
    return wrap(R"("space": {"kind": "rademacher", "n": 4},
  "functional": {"id": "sup_linear", "vectors": [[1, 0.5, 0, 0], [0, 1, 1, -0.5]]})",
                "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  if (id == "thm11")
    return wrap(R"("space": {"kind": "bernoulli", "n": 3, "p": 0.5},
  "functional": {"id": "ep_class", "centered": false, "tables": [
    [[0.2, 1.0], [0.0, 0.7], [0.1, 0.4]],
    [[0.0, 0.5], [0.3, 0.9], [0.0, 1.0]]]})",
                "{\"theorem\": \"thm11\", \"q\": [2, 3], \"theta\": 1.0}");
  if (id == "thm12_first" || id == "thm12_second" || id == "lemma7" || id == "lemma8") {
    const std::string body = R"("space": {"kind": "rademacher", "n": 3},
  "functional": {"id": "ep_class", "centered": true, "tables": [
    [[-1.0, 1.0], [-0.5, 0.5], [-0.25, 0.25]],
    [[-0.5, 0.5], [-1.0, 1.0], [0.75, -0.75]]]})";
    if (id == "lemma7") return wrap(body, "{\"theorem\": \"lemma7\"}");
    if (id == "lemma8") return wrap(body, "{\"theorem\": \"lemma8\", \"lambda\": 16}");
    return wrap(body, "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  }
  if (id == "thm13_upper" || id == "thm13_lower")
    return wrap(R"("space": {"kind": "bernoulli", "n": 3, "p": 0.5},
  "functional": {"id": "cond_rademacher", "tables": [
    [[0.0, 1.0], [0.0, 0.6], [0.0, 0.8]],
    [[0.2, 0.4], [0.0, 1.0], [0.1, 0.3]]]})",
                "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  if (id == "thm14" || id == "thm14_relaxed" || id == "cor4_tail" || id == "cor5" ||
      id == "cor5_chain") {
    const std::string body = R"("space": {"kind": "rademacher", "n": 4},
  "functional": {"id": "chaos", "d": 2, "tensors": [[
    {"set": [0, 1], "coeff": 1.0}, {"set": [0, 2], "coeff": 1.0},
    {"set": [0, 3], "coeff": 1.0}, {"set": [1, 2], "coeff": 1.0},
    {"set": [1, 3], "coeff": 1.0}, {"set": [2, 3], "coeff": 1.0}]]})";
    if (id == "cor4_tail") return wrap(body, "{\"theorem\": \"cor4_tail\", \"t\": [1, 2, 4]}");
    if (id == "cor5_chain") return wrap(body, "{\"theorem\": \"cor5_chain\"}");
    return wrap(body, "{\"theorem\": \"" + id + "\", \"q\": [2, 3]}");
  }
  if (id == "thm15" || id == "thm15_tail") {
    const std::string body = R"("space": {"kind": "bernoulli", "n": 4, "p": 0.5},
  "functional": {"id": "boolean", "d": 2, "tensors": [[
    {"set": [0, 1], "coeff": 1.0}, {"set": [0, 2], "coeff": 1.0},
    {"set": [0, 3], "coeff": 1.0}, {"set": [1, 2], "coeff": 1.0},
    {"set": [1, 3], "coeff": 1.0}, {"set": [2, 3], "coeff": 1.0}]]})";
    if (id == "thm15_tail") return wrap(body, "{\"theorem\": \"thm15_tail\", \"t\": [1, 2, 4]}");
    return wrap(body, "{\"theorem\": \"thm15\", \"q\": [2, 3]}");
  }
  if (id == "tri_em1" || id == "tri_m1" || id == "tri_good") {
    const std::string variant = id == "tri_good" ? "good" : "count";
    const std::string body = R"("space": {"kind": "bernoulli", "n": 6, "p": 0.5},
  "functional": {"id": "triangle", "n_vertices": 4, "variant": ")" +
                             variant + "\"}";
    if (id == "tri_em1") return wrap(body, "{\"theorem\": \"tri_em1\"}");
    if (id == "tri_m1") return wrap(body, "{\"theorem\": \"tri_m1\", \"q\": [1, 2, 3]}");
    return wrap(body, "{\"theorem\": \"tri_good\", \"q\": [2, 3]}");
  }
  throw std::invalid_argument("no default scenario for theorem id " + id);
}

}  // namespace momineq

#pragma once

// Functionals of a product space and their increment statistics. profile_at
// computes, at one configuration, the conditional expectations V+ and V- by
// exact resummation over each coordinate's support, the reduction-based V,
// and the two flavors of the increment bound M (sup of resampled positive
// increments and max of reduction increments). Norms of any of these come
// either from full enumeration or from seeded Monte Carlo with a CLT
// confidence half-width.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "momineq/product_space.hpp"

namespace momineq {

struct ReductionRule {
  enum class Kind { drop_to_infimum, user_supplied, baseline_value };
  Kind kind = Kind::drop_to_infimum;
  // user_supplied: Z_i as a function of (i, configuration); must not depend
  // on coordinate i (spot-checked by validate_reduction)
  std::function<double(std::size_t, const Configuration&)> reduced;
  // baseline_value: coordinate i is replaced by baseline_values[i] (or the
  // single broadcast entry) before re-evaluating
  std::vector<double> baseline_values;

  static ReductionRule drop_to_infimum() { return ReductionRule{}; }
  static ReductionRule user(std::function<double(std::size_t, const Configuration&)> fn) {
    ReductionRule r;
    r.kind = Kind::user_supplied;
    r.reduced = std::move(fn);
    return r;
  }
  static ReductionRule baseline(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("baseline reduction: empty value list");
    ReductionRule r;
    r.kind = Kind::baseline_value;
    r.baseline_values = std::move(values);
    return r;
  }
  double baseline_for(std::size_t i) const {
    return baseline_values.size() == 1 ? baseline_values[0] : baseline_values.at(i);
  }
};

struct Functional {
  std::function<double(const Configuration&)> eval;
  ReductionRule reduction;
};

struct IncrementProfile {
  double z = 0.0;
  double v_plus = 0.0;
  double v_minus = 0.0;
  double v = 0.0;
  double m_resampled = 0.0;  // max_i sup_{x'} (Z - Z'_i)_+
  double m_reduced = 0.0;    // max_i (Z - Z_i)
  double red_min = 0.0;      // min_i (Z - Z_i)
  double red_sum = 0.0;      // sum_i (Z - Z_i)
};

enum class MFlavor { resampled, reduced };

namespace detail {

inline std::size_t support_index_of(const Marginal& m, double value) {
  for (std::size_t k = 0; k < m.support.size(); ++k)
    if (m.support[k] == value) return k;
  return Configuration::npos;
}

}  // namespace detail

inline IncrementProfile profile_at(const ProductSpace& s, const Functional& f,
                                   const Configuration& config) {
  const std::size_t n = s.n();
  Configuration work = config;
  IncrementProfile p;
  p.z = f.eval(work);
  p.red_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Marginal& m = s.marginals[i];
    if (!m.is_finite())
      throw EnumerationUnavailable("exact profile: coordinate " + std::to_string(i) +
                                   " is sampler-kind");
    const double save_v = work.values[i];
    const std::size_t save_ix = work.indices[i];
    double z_inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.support.size(); ++k) {
      double zk;
      if (k == save_ix) {
        zk = p.z;
      } else {
        work.values[i] = m.support[k];
        work.indices[i] = k;
        zk = f.eval(work);
      }
      const double dz = p.z - zk;
      if (dz > 0.0) {
        p.v_plus += m.probs[k] * dz * dz;
        if (dz > p.m_resampled) p.m_resampled = dz;
      } else if (dz < 0.0) {
        p.v_minus += m.probs[k] * dz * dz;
      }
      if (zk < z_inf) z_inf = zk;
    }
    work.values[i] = save_v;
    work.indices[i] = save_ix;

    double zi;
    switch (f.reduction.kind) {
      case ReductionRule::Kind::drop_to_infimum:
        zi = z_inf;
        break;
      case ReductionRule::Kind::user_supplied:
        zi = f.reduction.reduced(i, work);
        break;
      case ReductionRule::Kind::baseline_value: {
        work.values[i] = f.reduction.baseline_for(i);
        work.indices[i] = detail::support_index_of(m, work.values[i]);
        zi = f.eval(work);
        work.values[i] = save_v;
        work.indices[i] = save_ix;
        break;
      }
      default:
        throw std::logic_error("unknown reduction kind");
    }
    const double d = p.z - zi;
    p.v += d * d;
    p.red_sum += d;
    if (d < p.red_min) p.red_min = d;
    if (d > p.m_reduced) p.m_reduced = d;
  }
  if (n == 0) p.red_min = 0.0;
  return p;
}

// Hybrid profile for Monte Carlo: finite coordinates are resummed exactly,
// sampler coordinates use an inner resampling budget per coordinate keyed by
// (seed, j, i, 2 + r). The reduction rule must not require enumeration.
inline IncrementProfile profile_estimate(const ProductSpace& s, const Functional& f,
                                         const Configuration& config, std::uint64_t seed,
                                         std::uint64_t j, std::uint64_t inner_budget) {
  const std::size_t n = s.n();
  bool needs_inner = false;
  for (const auto& m : s.marginals)
    if (!m.is_finite()) needs_inner = true;
  if (!needs_inner) return profile_at(s, f, config);

  Configuration work = config;
  IncrementProfile p;
  p.z = f.eval(work);
  p.red_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Marginal& m = s.marginals[i];
    const double save_v = work.values[i];
    const std::size_t save_ix = work.indices[i];
    double z_inf = std::numeric_limits<double>::infinity();
    if (m.is_finite()) {
      for (std::size_t k = 0; k < m.support.size(); ++k) {
        work.values[i] = m.support[k];
        work.indices[i] = k;
        const double zk = f.eval(work);
        const double dz = p.z - zk;
        if (dz > 0.0) {
          p.v_plus += m.probs[k] * dz * dz;
          if (dz > p.m_resampled) p.m_resampled = dz;
        } else if (dz < 0.0) {
          p.v_minus += m.probs[k] * dz * dz;
        }
        if (zk < z_inf) z_inf = zk;
      }
    } else {
      double vp = 0.0, vm = 0.0;
      for (std::uint64_t r = 0; r < inner_budget; ++r) {
        work.values[i] = [&] {
          if (m.sampler == Marginal::Sampler::uniform)
            return m.par0 + (m.par1 - m.par0) * rng::uniform01(rng::key(seed, j, i, 2 + r));
          return m.par0 + m.par1 * rng::gaussian(rng::key(seed, j, i, 2 + 2 * r),
                                                 rng::key(seed, j, i, 3 + 2 * r));
        }();
        work.indices[i] = Configuration::npos;
        const double zk = f.eval(work);
        const double dz = p.z - zk;
        if (dz > 0.0) {
          vp += dz * dz;
          if (dz > p.m_resampled) p.m_resampled = dz;
        } else if (dz < 0.0) {
          vm += dz * dz;
        }
        if (zk < z_inf) z_inf = zk;
      }
      p.v_plus += vp / static_cast<double>(inner_budget);
      p.v_minus += vm / static_cast<double>(inner_budget);
    }
    work.values[i] = save_v;
    work.indices[i] = save_ix;

    double zi;
    switch (f.reduction.kind) {
      case ReductionRule::Kind::drop_to_infimum:
        if (!m.is_finite())
          throw EnumerationUnavailable("drop_to_infimum needs finite marginals");
        zi = z_inf;
        break;
      case ReductionRule::Kind::user_supplied:
        zi = f.reduction.reduced(i, work);
        break;
      case ReductionRule::Kind::baseline_value:
        work.values[i] = f.reduction.baseline_for(i);
        work.indices[i] =
            m.is_finite() ? detail::support_index_of(m, work.values[i]) : Configuration::npos;
        zi = f.eval(work);
        work.values[i] = save_v;
        work.indices[i] = save_ix;
        break;
      default:
        throw std::logic_error("unknown reduction kind");
    }
    const double d = p.z - zi;
    p.v += d * d;
    p.red_sum += d;
    if (d < p.red_min) p.red_min = d;
    if (d > p.m_reduced) p.m_reduced = d;
  }
  return p;
}

// Spot check that a user-supplied reduction for coordinate i does not react
// to perturbations of coordinate i.
inline void validate_reduction(const ProductSpace& s, const Functional& f,
                               std::uint64_t seed = 17, unsigned trials = 8) {
  if (f.reduction.kind != ReductionRule::Kind::user_supplied) return;
  for (unsigned t = 0; t < trials; ++t) {
    Configuration c = sample_config(s, seed, t);
    for (std::size_t i = 0; i < s.n(); ++i) {
      const double zi = f.reduction.reduced(i, c);
      Configuration perturbed = c;
      const Marginal& m = s.marginals[i];
      if (m.is_finite()) {
        perturbed.indices[i] = (c.indices[i] + 1) % m.support.size();
        perturbed.values[i] = m.support[perturbed.indices[i]];
      } else {
        perturbed.values[i] += 1.0;
      }
      const double zi2 = f.reduction.reduced(i, perturbed);
      if (std::abs(zi - zi2) > 1e-9 * (1.0 + std::abs(zi)))
        throw std::invalid_argument("reduction rule for coordinate " + std::to_string(i) +
                                    " depends on that coordinate");
    }
  }
}

struct MomentEstimate {
  double q = 1.0;
  double value = 0.0;
  enum class Method { exact, mc } method = Method::exact;
  std::uint64_t samples = 0;
  double ci_halfwidth = 0.0;
};

struct QuantitySpec {
  enum class Kind {
    z,
    z_plus,   // (Z - EZ)_+
    z_minus,  // (Z - EZ)_-
    v_plus,
    v_minus,
    v,
    m_resampled,
    m_reduced,
    user
  };
  Kind kind = Kind::z;
  // user quantity; receives the configuration, its profile and EZ
  std::function<double(const Configuration&, const IncrementProfile&, double)> user;

  static QuantitySpec of(Kind k) { return QuantitySpec{k, nullptr}; }
  bool centered() const { return kind == Kind::z_plus || kind == Kind::z_minus; }
  bool needs_profile() const {
    switch (kind) {
      case Kind::z:
      case Kind::z_plus:
      case Kind::z_minus:
        return false;
      default:
        return true;
    }
  }
  double value_of(const Configuration& c, const IncrementProfile& p, double ez) const {
    switch (kind) {
      case Kind::z:
        return p.z;
      case Kind::z_plus:
        return std::max(p.z - ez, 0.0);
      case Kind::z_minus:
        return std::max(ez - p.z, 0.0);
      case Kind::v_plus:
        return p.v_plus;
      case Kind::v_minus:
        return p.v_minus;
      case Kind::v:
        return p.v;
      case Kind::m_resampled:
        return p.m_resampled;
      case Kind::m_reduced:
        return p.m_reduced;
      case Kind::user:
        return user(c, p, ez);
    }
    return 0.0;
  }
};

inline double exact_mean(const ProductSpace& s, const Functional& f) {
  auto sums = enumerate_reduce(
      s, 1, [&](const Configuration& c, double w, std::span<double> a) { a[0] += w * f.eval(c); });
  return sums[0];
}

inline MomentEstimate exact_norm(const ProductSpace& s, const Functional& f,
                                 const QuantitySpec& quantity, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("exact_norm: requires q >= 1");
  const double ez = quantity.centered() ? exact_mean(s, f) : 0.0;
  const bool prof = quantity.needs_profile();
  auto sums = enumerate_reduce(s, 1, [&](const Configuration& c, double w, std::span<double> a) {
    IncrementProfile p;
    if (prof) {
      p = profile_at(s, f, c);
    } else {
      p.z = f.eval(c);
    }
    a[0] += w * std::pow(std::abs(quantity.value_of(c, p, ez)), q);
  });
  MomentEstimate e;
  e.q = q;
  e.value = std::pow(sums[0], 1.0 / q);
  e.method = MomentEstimate::Method::exact;
  return e;
}

inline constexpr double kZ999 = 3.2905267314918945;  // two-sided 99.9% normal quantile

struct MeanEstimate {
  double value = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t samples = 0;
};

inline MeanEstimate mc_mean(const ProductSpace& s, const Functional& f, std::uint64_t seed,
                            std::uint64_t count) {
  if (count < 2) throw std::invalid_argument("mc_mean: requires count >= 2");
  double s1 = 0.0, s2 = 0.0;
  for (std::uint64_t j = 0; j < count; ++j) {
    const double z = f.eval(sample_config(s, seed, j));
    s1 += z;
    s2 += z * z;
  }
  const double mean = s1 / static_cast<double>(count);
  const double var =
      std::max(0.0, (s2 - static_cast<double>(count) * mean * mean) /
                        static_cast<double>(count - 1));
  return MeanEstimate{mean, kZ999 * std::sqrt(var / static_cast<double>(count)), count};
}

// Plug-in q-norm estimator. The confidence half-width is computed for
// E[|.|^q] at the 99.9% level and propagated through the 1/q power. Centered
// quantities use a dedicated EZ pass with 4x the sample budget on a derived
// seed stream.
inline MomentEstimate mc_norm(const ProductSpace& s, const Functional& f,
                              const QuantitySpec& quantity, double q, std::uint64_t seed,
                              std::uint64_t count, std::uint64_t inner_budget = 64) {
  if (count < 100) throw std::invalid_argument("mc_norm: requires count >= 100");
  if (!(q >= 1.0)) throw std::invalid_argument("mc_norm: requires q >= 1");
  double ez = 0.0;
  if (quantity.centered())
    ez = mc_mean(s, f, rng::derive_seed(seed, 0xCE17), 4 * count).value;
  const bool prof = quantity.needs_profile();
  double s1 = 0.0, s2 = 0.0;
  for (std::uint64_t j = 0; j < count; ++j) {
    const Configuration c = sample_config(s, seed, j);
    IncrementProfile p;
    if (prof) {
      p = profile_estimate(s, f, c, seed, j, inner_budget);
    } else {
      p.z = f.eval(c);
    }
    const double y = std::pow(std::abs(quantity.value_of(c, p, ez)), q);
    s1 += y;
    s2 += y * y;
  }
  const double mean = s1 / static_cast<double>(count);
  const double var =
      std::max(0.0, (s2 - static_cast<double>(count) * mean * mean) /
                        static_cast<double>(count - 1));
  const double hw_mean = kZ999 * std::sqrt(var / static_cast<double>(count));
  MomentEstimate e;
  e.q = q;
  e.method = MomentEstimate::Method::mc;
  e.samples = count;
  e.value = std::pow(mean, 1.0 / q);
  e.ci_halfwidth = mean > 0.0 ? hw_mean * e.value / (q * mean) : 0.0;
  return e;
}

struct EfronSteinGap {
  double variance = 0.0;
  double es_rhs = 0.0;       // (1/2) E[sum_i E'[(Z - Z'_i)^2]]
  double variant_rhs = 0.0;  // E[sum_i (Z - Z_i)^2]
};

inline EfronSteinGap efron_stein_gap(const ProductSpace& s, const Functional& f) {
  auto sums = enumerate_reduce(s, 4, [&](const Configuration& c, double w, std::span<double> a) {
    const IncrementProfile p = profile_at(s, f, c);
    a[0] += w * p.z;
    a[1] += w * p.z * p.z;
    a[2] += w * (p.v_plus + p.v_minus);
    a[3] += w * p.v;
  });
  EfronSteinGap g;
  g.variance = sums[1] - sums[0] * sums[0];
  g.es_rhs = 0.5 * sums[2];
  g.variant_rhs = sums[3];
  return g;
}

}  // namespace momineq

#pragma once

// Application layer for sums, suprema of empirical processes and conditional
// Rademacher averages: the scenario statistics (weak/strong variance, the
// envelope M, per-coordinate moments) and the specialized bounds built from
// them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "momineq/bounds.hpp"
#include "momineq/constants.hpp"
#include "momineq/increments.hpp"
#include "momineq/product_space.hpp"

namespace momineq {

// A finite class of per-coordinate functions given by value tables:
// tables[f][i][k] is f applied to support point k of marginal i.
struct FunctionClass {
  std::vector<std::vector<std::vector<double>>> tables;
  bool centered = false;  // centered classes take sup of |sum|, others sup of sum

  std::size_t size() const { return tables.size(); }

  void validate(const ProductSpace& s) const {
    if (tables.empty()) throw std::invalid_argument("function class: empty");
    for (const auto& f : tables) {
      if (f.size() != s.n())
        throw std::invalid_argument("function class: table arity != coordinate count");
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (!s.marginals[i].is_finite())
          throw EnumerationUnavailable("function class: coordinate " + std::to_string(i) +
                                       " is sampler-kind");
        if (f[i].size() != s.marginals[i].support.size())
          throw std::invalid_argument("function class: table size != support size");
      }
    }
    if (centered) {
      for (const auto& f : tables)
        for (std::size_t i = 0; i < f.size(); ++i) {
          double m = 0.0;
          for (std::size_t k = 0; k < f[i].size(); ++k) m += s.marginals[i].probs[k] * f[i][k];
          if (std::abs(m) > 1e-10)
            throw std::invalid_argument("function class: coordinate " + std::to_string(i) +
                                        " not centered");
        }
    }
  }

  bool nonnegative() const {
    for (const auto& f : tables)
      for (const auto& col : f)
        for (double v : col)
          if (v < 0.0) return false;
    return true;
  }

  double sum_f(std::size_t fi, const Configuration& c, std::size_t drop = Configuration::npos) const {
    double s = 0.0;
    const auto& f = tables[fi];
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i == drop) continue;
      s += f[i][c.indices[i]];
    }
    return s;
  }

  // Z = sup_f sum_i f(x_i) (nonnegative classes) or sup_f |sum_i f(x_i)|
  double sup_eval(const Configuration& c, std::size_t drop = Configuration::npos) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t fi = 0; fi < tables.size(); ++fi) {
      const double s = sum_f(fi, c, drop);
      best = std::max(best, centered ? std::abs(s) : s);
    }
    return best;
  }

  // M = sup_{i,f} |f(x_i)| on the given configuration
  double envelope(const Configuration& c) const {
    double best = 0.0;
    for (const auto& f : tables)
      for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f[i][c.indices[i]]));
    return best;
  }

  // sup_{i,f} f(x_i), without the absolute value
  double envelope_signed(const Configuration& c) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& f : tables)
      for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, f[i][c.indices[i]]);
    return best;
  }

  double table_abs_max() const {
    double best = 0.0;
    for (const auto& f : tables)
      for (const auto& col : f)
        for (double v : col) best = std::max(best, std::abs(v));
    return best;
  }
};

// Z = sup_f sum f(X_i) with the drop-the-term reduction.
inline Functional ep_functional(const FunctionClass& fc) {
  Functional f;
  f.eval = [fc](const Configuration& c) { return fc.sup_eval(c); };
  f.reduction = ReductionRule::user(
      [fc](std::size_t i, const Configuration& c) { return fc.sup_eval(c, i); });
  return f;
}

struct EPStats {
  double sigma2 = 0.0;  // sup_f sum_i E[f^2(X_i)]
  double Sigma2 = 0.0;  // E[sup_f sum_i f^2(X_i)]
  double ez = 0.0;
  std::map<double, double> m_norms;  // q -> ||M||_q
  double sup_single_l2 = 0.0;        // sup_{i,f} ||f(X_i)||_2
  double m_max = 0.0;                // sup_{i,f} sup_x |f(x)|
};

inline EPStats ep_stats_exact(const ProductSpace& s, const FunctionClass& fc,
                              std::span<const double> qs) {
  fc.validate(s);
  EPStats st;
  for (std::size_t fi = 0; fi < fc.size(); ++fi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
      const auto& m = s.marginals[i];
      double e2 = 0.0;
      for (std::size_t k = 0; k < m.support.size(); ++k)
        e2 += m.probs[k] * fc.tables[fi][i][k] * fc.tables[fi][i][k];
      acc += e2;
      st.sup_single_l2 = std::max(st.sup_single_l2, std::sqrt(e2));
    }
    st.sigma2 = std::max(st.sigma2, acc);
  }
  st.m_max = fc.table_abs_max();

  const std::size_t nq = qs.size();
  auto sums = enumerate_reduce(s, 2 + nq, [&](const Configuration& c, double w,
                                              std::span<double> a) {
    a[0] += w * fc.sup_eval(c);
    double sup2 = 0.0;
    for (std::size_t fi = 0; fi < fc.size(); ++fi) {
      double s2 = 0.0;
      for (std::size_t i = 0; i < s.n(); ++i) {
        const double v = fc.tables[fi][i][c.indices[i]];
        s2 += v * v;
      }
      sup2 = std::max(sup2, s2);
    }
    a[1] += w * sup2;
    const double env = fc.envelope(c);
    for (std::size_t k = 0; k < nq; ++k) a[2 + k] += w * std::pow(env, qs[k]);
  });
  st.ez = sums[0];
  st.Sigma2 = sums[1];
  for (std::size_t k = 0; k < nq; ++k) st.m_norms[qs[k]] = std::pow(sums[2 + k], 1.0 / qs[k]);
  return st;
}

inline EPStats ep_stats_mc(const ProductSpace& s, const FunctionClass& fc,
                           std::span<const double> qs, std::uint64_t seed, std::uint64_t count) {
  fc.validate(s);
  if (count < 100) throw std::invalid_argument("ep_stats_mc: requires count >= 100");
  EPStats st;
  for (std::size_t fi = 0; fi < fc.size(); ++fi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
      const auto& m = s.marginals[i];
      double e2 = 0.0;
      for (std::size_t k = 0; k < m.support.size(); ++k)
        e2 += m.probs[k] * fc.tables[fi][i][k] * fc.tables[fi][i][k];
      acc += e2;
      st.sup_single_l2 = std::max(st.sup_single_l2, std::sqrt(e2));
    }
    st.sigma2 = std::max(st.sigma2, acc);
  }
  st.m_max = fc.table_abs_max();
  std::vector<double> acc(2 + qs.size(), 0.0);
  for (std::uint64_t j = 0; j < count; ++j) {
    const Configuration c = sample_config(s, seed, j);
    acc[0] += fc.sup_eval(c);
    double sup2 = 0.0;
    for (std::size_t fi = 0; fi < fc.size(); ++fi) {
      double s2 = 0.0;
      for (std::size_t i = 0; i < s.n(); ++i) {
        const double v = fc.tables[fi][i][c.indices[i]];
        s2 += v * v;
      }
      sup2 = std::max(sup2, s2);
    }
    acc[1] += sup2;
    const double env = fc.envelope(c);
    for (std::size_t k = 0; k < qs.size(); ++k) acc[2 + k] += std::pow(env, qs[k]);
  }
  const double dn = static_cast<double>(count);
  st.ez = acc[0] / dn;
  st.Sigma2 = acc[1] / dn;
  for (std::size_t k = 0; k < qs.size(); ++k)
    st.m_norms[qs[k]] = std::pow(acc[2 + k] / dn, 1.0 / qs[k]);
  return st;
}

// Khinchine: ||(Z)_+||_q <= sqrt(2Kq) ||a||_2 and ||Z||_q <= 2^{1/q} of that.
inline BoundResult khinchine_bound(std::span<const double> a, double q, bool abs_norm) {
  if (a.empty()) throw std::invalid_argument("khinchine_bound: empty weight vector");
  if (!(q >= 2.0) || q != std::floor(q))
    throw std::invalid_argument("khinchine_bound: requires integer q >= 2");
  double l2 = 0.0;
  for (double w : a) l2 += w * w;
  l2 = std::sqrt(l2);
  const double bigk = constant("K").value;
  BoundResult r;
  r.theorem = abs_norm ? "thm7_abs" : "thm7_pos";
  r.q = q;
  r.value = (abs_norm ? std::pow(2.0, 1.0 / q) : 1.0) * std::sqrt(2.0 * bigk * q) * l2;
  r.side = abs_norm ? BoundResult::Side::raw_norm : BoundResult::Side::upper_plus;
  r.constants_used = {{"K", bigk}};
  return r;
}

// Marcinkiewicz companion: ||sum X_i||_q <= 2^{1+1/q} sqrt(2Kq)
// sqrt(||sum X_i^2||_{q/2}) for centered summands.
inline double marcinkiewicz_bound(double q, double norm_sumsq_half_q) {
  if (!(q >= 2.0) || q != std::floor(q))
    throw std::invalid_argument("marcinkiewicz_bound: requires integer q >= 2");
  if (norm_sumsq_half_q < 0.0)
    throw std::invalid_argument("marcinkiewicz_bound: negative norm input");
  return std::pow(2.0, 1.0 + 1.0 / q) * std::sqrt(2.0 * constant("K").value * q) *
         std::sqrt(norm_sumsq_half_q);
}

// Scenario moments for the Rosenthal-type bounds on Z = sum_i X_i.
struct SumStats {
  double ez = 0.0;               // E[Z] (nonnegative case)
  double sum_mean_sq = 0.0;      // sum_i E[X_i^2]
  double sigma = 0.0;            // sqrt(sum_i E[X_i^2]) (centered case)
  double norm_max_q = 0.0;       // ||max_i X_i||_q
  double norm_max_abs_q = 0.0;   // ||max_i |X_i|||_q
};

enum class RosenthalKind { nonneg_thm8, centered_thm9 };

inline std::vector<BoundResult> rosenthal_bounds(RosenthalKind kind, const SumStats& st,
                                                 double q, double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("rosenthal_bounds: theta must lie in (0, 1]");
  const double kappa = constant("kappa").value;
  const double bigk = constant("K").value;
  std::vector<BoundResult> out;
  if (kind == RosenthalKind::nonneg_thm8) {
    if (!(q >= 2.0)) throw std::invalid_argument("thm8: requires q >= 2");
    BoundResult plus;
    plus.theorem = "thm8_plus";
    plus.q = q;
    plus.side = BoundResult::Side::upper_plus;
    plus.value = std::sqrt(2.0 * kappa * q * st.norm_max_q * st.ez) + kappa * q * st.norm_max_q;
    plus.constants_used = {{"kappa", kappa}};
    out.push_back(plus);

    BoundResult minus;
    minus.theorem = "thm8_minus";
    minus.q = q;
    minus.side = BoundResult::Side::upper_minus;
    minus.value = std::sqrt(bigk * q * st.sum_mean_sq);
    minus.constants_used = {{"K", bigk}};
    out.push_back(minus);

    BoundResult mean;
    mean.theorem = "thm8_mean";
    mean.q = q;
    mean.side = BoundResult::Side::raw_norm;
    mean.value = (1.0 + theta) * st.ez + 0.5 * kappa * q * (1.0 + 1.0 / theta) * st.norm_max_q;
    mean.constants_used = {{"kappa", kappa}};
    out.push_back(mean);
    return out;
  }
  if (!(q >= 2.0) || q != std::floor(q))
    throw std::invalid_argument("thm9: requires integer q >= 2");
  BoundResult r;
  r.theorem = "thm9";
  r.q = q;
  r.side = BoundResult::Side::upper_plus;
  r.value = st.sigma * std::sqrt(2.0 * kappa * (2.0 + theta) * q) +
            q * kappa * std::sqrt(1.0 + 1.0 / theta) * st.norm_max_abs_q;
  r.constants_used = {{"kappa", kappa}};
  out.push_back(r);
  return out;
}

// Sigma^2 <= sigma^2 + 32 sqrt(E[M^2]) E[Z] + 8 E[M^2]
inline std::pair<double, double> lemma7_check(const EPStats& st, double em2) {
  const double rhs = st.sigma2 + 32.0 * std::sqrt(em2) * st.ez + 8.0 * em2;
  return {st.Sigma2, rhs};
}

// lhs = E[sup_f |sum_i eps_i f^2(X_i) 1{sup_f |f(X_i)| > t0}|] with
// t0 = sqrt(lambda E[M^2]); rhs = E[M^2] / (1 - 2/sqrt(lambda))^2.
inline std::pair<double, double> lemma8_check(const ProductSpace& s, const FunctionClass& fc,
                                              double lambda) {
  if (!(lambda > 4.0)) throw std::invalid_argument("lemma8_check: requires lambda > 4");
  fc.validate(s);
  const std::size_t n = s.n();
  if (n > 20) throw std::invalid_argument("lemma8_check: sign enumeration needs n <= 20");

  auto em2v = enumerate_reduce(s, 1, [&](const Configuration& c, double w, std::span<double> a) {
    const double m = fc.envelope(c);
    a[0] += w * m * m;
  });
  const double em2 = em2v[0];
  const double t0 = std::sqrt(lambda * em2);

  const std::uint64_t signs = std::uint64_t(1) << n;
  auto lhsv = enumerate_reduce(s, 1, [&](const Configuration& c, double w, std::span<double> a) {
    // per-coordinate indicator: sup_f |f(x_i)| > t0
    std::vector<double> live(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double m = 0.0;
      for (std::size_t fi = 0; fi < fc.size(); ++fi)
        m = std::max(m, std::abs(fc.tables[fi][i][c.indices[i]]));
      live[i] = m > t0 ? 1.0 : 0.0;
    }
    double acc = 0.0;
    for (std::uint64_t eps = 0; eps < signs; ++eps) {
      double sup = 0.0;
      for (std::size_t fi = 0; fi < fc.size(); ++fi) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (live[i] == 0.0) continue;
          const double v = fc.tables[fi][i][c.indices[i]];
          sum += ((eps >> i) & 1 ? 1.0 : -1.0) * v * v;
        }
        sup = std::max(sup, std::abs(sum));
      }
      acc += sup;
    }
    a[0] += w * acc / static_cast<double>(signs);
  });
  const double denom = 1.0 - 2.0 / std::sqrt(lambda);
  return {lhsv[0], em2 / (denom * denom)};
}

// Conditional Rademacher average at one configuration:
// E_eps[sup_f |sum_i eps_i f(x_i)|], exact over the 2^n sign patterns.
inline double conditional_rademacher_value(const ProductSpace& s, const FunctionClass& fc,
                                           const Configuration& c,
                                           std::size_t drop = Configuration::npos) {
  const std::size_t n = s.n();
  if (n > 20) throw EnumerationUnavailable("conditional rademacher: inner 2^n needs n <= 20");
  const std::uint64_t signs = std::uint64_t(1) << n;
  double acc = 0.0;
  for (std::uint64_t eps = 0; eps < signs; ++eps) {
    double sup = 0.0;
    for (std::size_t fi = 0; fi < fc.size(); ++fi) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == drop) continue;
        sum += ((eps >> i) & 1 ? 1.0 : -1.0) * fc.tables[fi][i][c.indices[i]];
      }
      sup = std::max(sup, std::abs(sum));
    }
    acc += sup;
  }
  return acc / static_cast<double>(signs);
}

// Monte Carlo inner expectation over the sign patterns; counter-based, so a
// fixed (seed, config tag) pair reproduces the same value.
inline double conditional_rademacher_value_mc(const ProductSpace& s, const FunctionClass& fc,
                                              const Configuration& c, std::uint64_t seed,
                                              std::uint64_t inner_samples,
                                              std::size_t drop = Configuration::npos) {
  const std::size_t n = s.n();
  if (inner_samples == 0)
    throw std::invalid_argument("conditional rademacher: needs inner samples");
  double acc = 0.0;
  for (std::uint64_t r = 0; r < inner_samples; ++r) {
    double sup = 0.0;
    for (std::size_t fi = 0; fi < fc.size(); ++fi) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == drop) continue;
        const double eps = rng::key(seed, r, i, 40) & 1 ? 1.0 : -1.0;
        sum += eps * fc.tables[fi][i][c.indices[i]];
      }
      sup = std::max(sup, std::abs(sum));
    }
    acc += sup;
  }
  return acc / static_cast<double>(inner_samples);
}

inline Functional conditional_rademacher_functional(const ProductSpace& s,
                                                    const FunctionClass& fc) {
  fc.validate(s);
  Functional f;
  f.eval = [&s, fc](const Configuration& c) { return conditional_rademacher_value(s, fc, c); };
  f.reduction = ReductionRule::user([&s, fc](std::size_t i, const Configuration& c) {
    return conditional_rademacher_value(s, fc, c, i);
  });
  return f;
}

// Conditional Rademacher moment bounds:
// upper: sqrt(2 kappa q ||M||_q E[Z]) + kappa q ||M||_q
// lower: sqrt(2 C2) { sqrt(q ||M||_q E[Z]) + 2 q ||M||_q }
inline std::pair<BoundResult, BoundResult> thm13_bounds(double ez, double norm_m_q, double q) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm13_bounds: requires q >= 2");
  if (ez < 0.0 || norm_m_q < 0.0) throw std::invalid_argument("thm13_bounds: negative input");
  const double kappa = constant("kappa").value;
  const double c2 = constant("C2").value;
  BoundResult up;
  up.theorem = "thm13_upper";
  up.q = q;
  up.side = BoundResult::Side::upper_plus;
  up.value = std::sqrt(2.0 * kappa * q * norm_m_q * ez) + kappa * q * norm_m_q;
  up.constants_used = {{"kappa", kappa}};
  BoundResult lo;
  lo.theorem = "thm13_lower";
  lo.q = q;
  lo.side = BoundResult::Side::upper_minus;
  lo.value = std::sqrt(2.0 * c2) * (std::sqrt(q * norm_m_q * ez) + 2.0 * q * norm_m_q);
  lo.constants_used = {{"C2", c2}};
  return {up, lo};
}

// Theorem 10 bounds for Z = sup_{t in T} sum t_i X_i over Rademacher signs.
inline BoundResult sup_linear_plus_bound(double q, double sup_l2) {
  if (!(q >= 2.0) || q != std::floor(q))
    throw std::invalid_argument("thm10_plus: requires integer q >= 2");
  const double bigk = constant("K").value;
  BoundResult r;
  r.theorem = "thm10_plus";
  r.q = q;
  r.side = BoundResult::Side::upper_plus;
  r.value = std::sqrt(2.0 * bigk * q) * sup_l2;
  r.constants_used = {{"K", bigk}};
  return r;
}

inline BoundResult sup_linear_minus_bound(double q, double sup_l2, double sup_entry) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm10_minus: requires q >= 2");
  const double c1 = constant("C1").value;
  BoundResult r;
  r.theorem = "thm10_minus";
  r.q = q;
  r.side = BoundResult::Side::upper_minus;
  r.value = std::max(std::sqrt(2.0 * c1 * q) * sup_l2, 2.0 * std::sqrt(c1 * q) * sup_entry);
  r.constants_used = {{"C1", c1}};
  return r;
}

// Theorem 11: ||Z||_q <= (1+theta) E[Z] + (kappa/2) q (1 + 1/theta) ||M||_q.
// theta is restricted to (0, 1], the range the underlying bound supports.
inline BoundResult nonneg_class_norm_bound(double q, double ez, double norm_m_q, double theta) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm11: requires q >= 2");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("thm11: theta must lie in (0, 1]");
  const double kappa = constant("kappa").value;
  BoundResult r;
  r.theorem = "thm11";
  r.q = q;
  r.side = BoundResult::Side::raw_norm;
  r.value = (1.0 + theta) * ez + 0.5 * kappa * q * (1.0 + 1.0 / theta) * norm_m_q;
  r.constants_used = {{"kappa", kappa}};
  return r;
}

// Theorem 12 bounds for centered empirical process suprema.
inline BoundResult ep_centered_plus_bound(double q, const EPStats& st) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm12_first: requires q >= 2");
  auto it = st.m_norms.find(q);
  if (it == st.m_norms.end()) throw std::invalid_argument("thm12_first: ||M||_q not available");
  const double kappa = constant("kappa").value;
  BoundResult r;
  r.theorem = "thm12_first";
  r.q = q;
  r.side = BoundResult::Side::upper_plus;
  r.value = std::sqrt(2.0 * kappa * q) * (std::sqrt(st.Sigma2) + std::sqrt(st.sigma2)) +
            2.0 * kappa * q * (it->second + st.sup_single_l2);
  r.constants_used = {{"kappa", kappa}};
  return r;
}

inline BoundResult ep_centered_norm_bound(double q, const EPStats& st) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm12_second: requires q >= 2");
  auto itq = st.m_norms.find(q);
  auto it2 = st.m_norms.find(2.0);
  if (itq == st.m_norms.end() || it2 == st.m_norms.end())
    throw std::invalid_argument("thm12_second: ||M||_q and ||M||_2 required");
  const double kappa = constant("kappa").value;
  BoundResult r;
  r.theorem = "thm12_second";
  r.q = q;
  r.side = BoundResult::Side::raw_norm;
  r.value = 2.0 * st.ez + 2.0 * std::sqrt(st.sigma2) * std::sqrt(2.0 * kappa * q) +
            20.0 * kappa * q * itq->second + 4.0 * std::sqrt(kappa * q) * it2->second;
  r.constants_used = {{"kappa", kappa}};
  return r;
}

}  // namespace momineq

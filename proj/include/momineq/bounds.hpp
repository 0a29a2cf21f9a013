#pragma once

// Closed-form right-hand sides of the core moment inequalities and the tail
// bounds assembled from moment tables. Everything here is pure formula
// evaluation; the callers supply exact or estimated norms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "momineq/constants.hpp"

namespace momineq {

struct BoundResult {
  std::string theorem;
  double q = 0.0;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> constants_used;
  enum class Side { upper_plus, upper_minus, two_sided, raw_norm } side = Side::raw_norm;
};

// Inputs for moment_bound; leave unused fields NaN.
struct BoundInputs {
  double q = std::numeric_limits<double>::quiet_NaN();
  double c = std::numeric_limits<double>::quiet_NaN();  // thm1: sup V+ (and V-); cor2: E[g(Z)]
  double norm_vplus = std::numeric_limits<double>::quiet_NaN();   // ||V+||_{q/2}
  double norm_vminus = std::numeric_limits<double>::quiet_NaN();  // ||V-||_{q/2}
  double norm_v = std::numeric_limits<double>::quiet_NaN();       // ||V||_{q/2}
  double norm_m_q = std::numeric_limits<double>::quiet_NaN();     // ||M||_q
  double expectation_z = std::numeric_limits<double>::quiet_NaN();
  double a_self = std::numeric_limits<double>::quiet_NaN();  // A of the self-bounding condition
  double norm_w_q = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void need(double x, const char* theorem, const char* what) {
  if (std::isnan(x))
    throw std::invalid_argument(std::string(theorem) + ": missing input " + what);
  if (x < 0.0) throw std::invalid_argument(std::string(theorem) + ": negative input " + what);
}

inline void need_signed(double x, const char* theorem, const char* what) {
  if (std::isnan(x))
    throw std::invalid_argument(std::string(theorem) + ": missing input " + what);
}

inline void require_integer_q(double q, const char* theorem) {
  if (q != std::floor(q))
    throw std::invalid_argument(std::string(theorem) + ": requires integer q");
}

inline void require_q_at_least(double q, double lo, const char* theorem) {
  if (!(q >= lo))
    throw std::invalid_argument(std::string(theorem) + ": requires q >= " +
                                std::to_string(lo));
}

}  // namespace detail

// theorem ids accepted by moment_bound
// thm1_plus, thm1_norm, thm2_plus, thm2_plus_tight, thm2_minus,
// thm2_minus_tight, thm3, thm4_vplus, thm4_v, cor1_mean, cor1_plus,
// cor1_minus, cor2, cor3_mean, cor3_plus, cor3_minus
inline BoundResult moment_bound(const std::string& theorem, const BoundInputs& in) {
  using detail::need;
  using detail::need_signed;
  using detail::require_integer_q;
  using detail::require_q_at_least;

  const double kappa = constant("kappa").value;
  const double bigk = constant("K").value;
  BoundResult r;
  r.theorem = theorem;
  r.q = in.q;
  need_signed(in.q, theorem.c_str(), "q");
  const double q = in.q;

  if (theorem == "thm1_plus" || theorem == "thm1_norm") {
    require_q_at_least(q, 2.0, theorem.c_str());
    require_integer_q(q, theorem.c_str());
    need(in.c, theorem.c_str(), "c");
    if (theorem == "thm1_plus") {
      r.value = std::sqrt(bigk * q * in.c);
      r.side = BoundResult::Side::upper_plus;
    } else {
      need_signed(in.expectation_z, theorem.c_str(), "expectation_z");
      r.value = in.expectation_z + std::pow(2.0, 1.0 / q) * std::sqrt(bigk * q * in.c);
      r.side = BoundResult::Side::raw_norm;
    }
    r.constants_used = {{"K", bigk}};
    return r;
  }
  if (theorem == "thm2_plus" || theorem == "thm2_plus_tight" || theorem == "thm2_minus" ||
      theorem == "thm2_minus_tight") {
    require_q_at_least(q, 2.0, theorem.c_str());
    const bool plus = theorem == "thm2_plus" || theorem == "thm2_plus_tight";
    const bool tight = theorem.ends_with("_tight");
    const double nv = plus ? in.norm_vplus : in.norm_vminus;
    need(nv, theorem.c_str(), plus ? "norm_vplus" : "norm_vminus");
    const double kq = kappa_q(q);
    const double factor = tight ? (1.0 - 1.0 / q) : 1.0;
    r.value = std::sqrt(factor * 2.0 * kq * q * nv);
    r.side = plus ? BoundResult::Side::upper_plus : BoundResult::Side::upper_minus;
    r.constants_used = {{"kappa_q", kq}};
    return r;
  }
  if (theorem == "thm3") {
    require_q_at_least(q, 2.0, "thm3");
    need(in.norm_v, "thm3", "norm_v");
    const double kq = kappa_q(q);
    r.value = std::sqrt(kq * q * in.norm_v);
    r.side = BoundResult::Side::upper_plus;
    r.constants_used = {{"kappa_q", kq}};
    return r;
  }
  if (theorem == "thm4_vplus" || theorem == "thm4_v") {
    require_q_at_least(q, 2.0, theorem.c_str());
    need(in.norm_m_q, theorem.c_str(), "norm_m_q");
    const bool vp = theorem == "thm4_vplus";
    const double nv = vp ? in.norm_vplus : in.norm_v;
    need(nv, theorem.c_str(), vp ? "norm_vplus" : "norm_v");
    const double ca = constant(vp ? "C1" : "C2").value;
    r.value = std::sqrt(ca * q * std::max(nv, q * in.norm_m_q * in.norm_m_q));
    r.side = BoundResult::Side::upper_minus;
    r.constants_used = {{vp ? "C1" : "C2", ca}};
    return r;
  }
  if (theorem == "cor1_mean") {
    require_q_at_least(q, 1.0, "cor1_mean");
    require_integer_q(q, "cor1_mean");
    need(in.a_self, "cor1_mean", "a_self");
    need_signed(in.expectation_z, "cor1_mean", "expectation_z");
    r.value = in.expectation_z + in.a_self * (q - 1.0) / 2.0;
    r.side = BoundResult::Side::raw_norm;
    return r;
  }
  if (theorem == "cor1_plus") {
    require_q_at_least(q, 2.0, "cor1_plus");
    need(in.a_self, "cor1_plus", "a_self");
    need(in.expectation_z, "cor1_plus", "expectation_z");
    r.value = std::sqrt(kappa) *
              (std::sqrt(in.a_self * q * in.expectation_z) + in.a_self * q / 2.0);
    r.side = BoundResult::Side::upper_plus;
    r.constants_used = {{"kappa", kappa}};
    return r;
  }
  if (theorem == "cor1_minus") {
    require_q_at_least(q, 2.0, "cor1_minus");
    require_integer_q(q, "cor1_minus");
    need(in.a_self, "cor1_minus", "a_self");
    need(in.expectation_z, "cor1_minus", "expectation_z");
    const double c = constant("cor1_C").value;
    r.value = std::sqrt(c * q * in.a_self * in.expectation_z);
    r.side = BoundResult::Side::upper_minus;
    r.constants_used = {{"cor1_C", c}};
    return r;
  }
  if (theorem == "cor2") {
    require_q_at_least(q, 2.0, "cor2");
    require_integer_q(q, "cor2");
    need(in.c, "cor2", "c (E[g(Z)])");
    r.value = std::sqrt(bigk * q * in.c);
    r.side = BoundResult::Side::upper_minus;
    r.constants_used = {{"K", bigk}};
    return r;
  }
  if (theorem == "cor3_mean" || theorem == "cor3_plus" || theorem == "cor3_minus") {
    require_q_at_least(q, 2.0, theorem.c_str());
    need(in.norm_w_q, theorem.c_str(), "norm_w_q");
    r.constants_used = {{"kappa", kappa}};
    if (theorem == "cor3_mean") {
      need(in.expectation_z, "cor3_mean", "expectation_z");
      need(in.theta, "cor3_mean", "theta");
      if (!(in.theta > 0.0 && in.theta <= 1.0))
        throw std::invalid_argument("cor3_mean: theta must lie in (0, 1]");
      r.value = (1.0 + in.theta) * in.expectation_z +
                0.5 * kappa * q * (1.0 + 1.0 / in.theta) * in.norm_w_q;
      r.side = BoundResult::Side::raw_norm;
      return r;
    }
    if (theorem == "cor3_plus") {
      need(in.expectation_z, "cor3_plus", "expectation_z");
      r.value = std::sqrt(2.0 * kappa * q * in.norm_w_q * in.expectation_z) +
                kappa * q * in.norm_w_q;
      r.side = BoundResult::Side::upper_plus;
      return r;
    }
    need(in.norm_m_q, "cor3_minus", "norm_m_q");
    need(in.expectation_z, "cor3_minus", "expectation_z");
    const double c2 = constant("C2").value;
    const double inner = std::max(
        in.norm_m_q * (2.0 * in.expectation_z + 2.0 * q * in.norm_w_q),
        q * in.norm_m_q * in.norm_m_q);
    r.value = std::sqrt(c2 * q * inner);
    r.side = BoundResult::Side::upper_minus;
    r.constants_used = {{"C2", c2}};
    return r;
  }
  throw std::invalid_argument("moment_bound: unknown theorem id " + theorem);
}

// min(1, min_q (m_q / t)^q) over a table of upper bounds on ||(Z-EZ)_+||_q.
inline double tail_from_moments(double t, const std::map<double, double>& moments) {
  if (!(t > 0.0)) throw std::invalid_argument("tail_from_moments: requires t > 0");
  if (moments.empty()) throw std::invalid_argument("tail_from_moments: empty moment table");
  double best = 1.0;
  for (const auto& [q, mq] : moments) {
    if (!(q > 0.0) || mq < 0.0)
      throw std::invalid_argument("tail_from_moments: invalid table entry");
    best = std::min(best, std::pow(mq / t, q));
  }
  return best;
}

// 2 exp(-(log 2 / 4 kappa) min_j (t / (2 d E[W_j]))^{2/j}), capped at 1.
inline double chaos_tail(double t, const std::vector<double>& ew, std::size_t d) {
  if (!(t > 0.0)) throw std::invalid_argument("chaos_tail: requires t > 0");
  if (ew.size() != d || d == 0) throw std::invalid_argument("chaos_tail: needs E[W_1..W_d]");
  const double kappa = constant("kappa").value;
  double expo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= d; ++j) {
    const double w = ew[j - 1];
    if (!(w > 0.0)) throw std::invalid_argument("chaos_tail: E[W_j] must be positive");
    expo = std::min(expo, std::pow(t / (2.0 * static_cast<double>(d) * w),
                                   2.0 / static_cast<double>(j)));
  }
  return std::min(1.0, 2.0 * std::exp(-std::log(2.0) / (4.0 * kappa) * expo));
}

// exp(-(log 2 / d kappa) min_j [(t / (4 d sqrt(EZ EM_j)))^{2/j} ^ (t / (4 d
// EM_{d-j}))^{1/j}]), capped at 1. EM holds E[M_0..M_{d-1}]; the j = d term of
// the first factor uses E[M_d] = E[Z] (the degree-d sub-polynomial at J = {}
// is Z itself).
inline double boolean_tail(double t, double ez, const std::vector<double>& em, std::size_t d) {
  if (!(t > 0.0)) throw std::invalid_argument("boolean_tail: requires t > 0");
  if (!(ez > 0.0)) throw std::invalid_argument("boolean_tail: requires E[Z] > 0");
  if (em.size() != d || d == 0) throw std::invalid_argument("boolean_tail: needs E[M_0..M_{d-1}]");
  for (double v : em)
    if (!(v > 0.0)) throw std::invalid_argument("boolean_tail: E[M_k] must be positive");
  const double kappa = constant("kappa").value;
  const double dd = static_cast<double>(d);
  double expo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= d; ++j) {
    const double emj = j == d ? ez : em[j];
    const double first = std::pow(t / (4.0 * dd * std::sqrt(ez * emj)), 2.0 / double(j));
    const double second = std::pow(t / (4.0 * dd * em[d - j]), 1.0 / double(j));
    expo = std::min(expo, std::min(first, second));
  }
  return std::min(1.0, std::exp(-std::log(2.0) / (dd * kappa) * expo));
}

}  // namespace momineq

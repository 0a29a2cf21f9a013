#pragma once

// Named numeric constants used throughout the bounds: two closed forms
// (kappa, K) and three roots of scalar transcendental equations (C1, C2,
// cor1_C). Roots are found by bisection and carry a certified enclosure.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace momineq {

struct ConstantValue {
  std::string name;
  double value = 0.0;
  double enclosure_low = 0.0;
  double enclosure_high = 0.0;
  enum class Method { closed_form, bisection } method = Method::closed_form;
};

namespace detail {

inline ConstantValue closed_form(std::string name, double v) {
  return ConstantValue{std::move(name), v, v, v, ConstantValue::Method::closed_form};
}

// Bisection on a strictly decreasing function. The bracket starts at
// [1e-3, 64] and is expanded until it traps the sign change; the final
// interval width is at most 1e-12.
inline ConstantValue bisect_decreasing(std::string name,
                                       const std::function<double(double)>& f) {
  double lo = 1e-3, hi = 64.0;
  for (int k = 0; f(lo) < 0.0; ++k) {
    lo *= 0.5;
    if (k > 200) throw std::runtime_error("bisect: no positive endpoint for " + name);
  }
  for (int k = 0; f(hi) > 0.0; ++k) {
    hi *= 2.0;
    if (k > 200) throw std::runtime_error("bisect: no negative endpoint for " + name);
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return ConstantValue{std::move(name), 0.5 * (lo + hi), lo, hi,
                       ConstantValue::Method::bisection};
}

// e^{-1/2} + e^{1/sqrt(x)} / (a x) - 1, decreasing from +inf to e^{-1/2}-1.
inline double c_a_equation(double a, double x) {
  return std::exp(-0.5) + std::exp(1.0 / std::sqrt(x)) / (a * x) - 1.0;
}

// e^{-1/2} + e^{-1 + 1/x} / (2x) - 1
inline double cor1_c_equation(double x) {
  return std::exp(-0.5) + std::exp(-1.0 + 1.0 / x) / (2.0 * x) - 1.0;
}

}  // namespace detail

// Residual of the defining equation at x; zero (exactly) for closed forms.
inline double constant_residual(std::string_view name, double x) {
  if (name == "kappa" || name == "K") return 0.0;
  if (name == "C1") return detail::c_a_equation(1.0, x);
  if (name == "C2") return detail::c_a_equation(2.0, x);
  if (name == "cor1_C") return detail::cor1_c_equation(x);
  throw std::invalid_argument("unknown constant: " + std::string(name));
}

inline const ConstantValue& constant(std::string_view name) {
  if (name == "kappa") {
    static const ConstantValue v = detail::closed_form(
        "kappa", std::sqrt(std::exp(1.0)) / (2.0 * (std::sqrt(std::exp(1.0)) - 1.0)));
    return v;
  }
  if (name == "K") {
    static const ConstantValue v =
        detail::closed_form("K", 1.0 / (std::exp(1.0) - std::sqrt(std::exp(1.0))));
    return v;
  }
  if (name == "C1") {
    static const ConstantValue v = detail::bisect_decreasing(
        "C1", [](double x) { return detail::c_a_equation(1.0, x); });
    return v;
  }
  if (name == "C2") {
    static const ConstantValue v = detail::bisect_decreasing(
        "C2", [](double x) { return detail::c_a_equation(2.0, x); });
    return v;
  }
  if (name == "cor1_C") {
    static const ConstantValue v = detail::bisect_decreasing("cor1_C", detail::cor1_c_equation);
    return v;
  }
  throw std::invalid_argument("unknown constant: " + std::string(name));
}

inline const std::vector<ConstantValue>& all_constants() {
  static const std::vector<ConstantValue> v = {constant("kappa"), constant("K"), constant("C1"),
                                               constant("C2"), constant("cor1_C")};
  return v;
}

// kappa_1 = 1; for q >= 2 the closed form 1/2 (1 - (1 - 1/q)^{q/2})^{-1}.
// The formula is continued by 1 on [1, 2] (it equals 1 at q = 2), which keeps
// the sequence nondecreasing.
inline double kappa_q(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("kappa_q: requires q >= 1");
  if (q <= 2.0) return 1.0;
  return 0.5 / (1.0 - std::pow(1.0 - 1.0 / q, 0.5 * q));
}

// x_q = ((q-1)/q)^{q/2} (1 + (1/K) ((q-2)/(q-1))^{(q-2)/2}), q >= 4.
inline double lemma6_x(std::int64_t q) {
  if (q < 4) throw std::invalid_argument("lemma6_x: requires q >= 4");
  const double qd = static_cast<double>(q);
  const double inv_k = std::exp(1.0) - std::sqrt(std::exp(1.0));
  const double head = std::pow((qd - 1.0) / qd, 0.5 * qd);
  const double tail = std::pow((qd - 2.0) / (qd - 1.0), 0.5 * (qd - 2.0));
  return head * (1.0 + inv_k * tail);
}

}  // namespace momineq

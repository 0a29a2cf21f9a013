#pragma once

// Phi-entropies over finite distributions and the numerical checks built on
// them: the duality lower form, the independent-copy symmetrization bounds,
// tensorization over product spaces, the phi-Sobolev inequalities for
// monotone convex wrappings, and the generalized Efron-Stein moment
// recursions. All gap operations return RHS - LHS, so a nonnegative result
// (up to the documented tolerance) means the inequality holds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "momineq/increments.hpp"
#include "momineq/product_space.hpp"

namespace momineq {

struct PhiSpec {
  enum class Kind { power, xlogx, square };
  Kind kind = Kind::square;
  double p = 2.0;  // power kind only, p in (1, 2]

  static PhiSpec square() { return PhiSpec{Kind::square, 2.0}; }
  static PhiSpec xlogx() { return PhiSpec{Kind::xlogx, 0.0}; }
  static PhiSpec power(double p) {
    if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("power phi: requires p in (1, 2]");
    return PhiSpec{Kind::power, p};
  }

  bool nonneg_only() const { return kind != Kind::square; }

  double phi(double x) const {
    switch (kind) {
      case Kind::square:
        return x * x;
      case Kind::xlogx:
        return x <= 0.0 ? 0.0 : x * std::log(x);
      case Kind::power:
        return std::pow(x, p);
    }
    return 0.0;
  }

  // right derivative; -inf at 0 for xlogx
  double dphi(double x) const {
    switch (kind) {
      case Kind::square:
        return 2.0 * x;
      case Kind::xlogx:
        return x <= 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x) + 1.0;
      case Kind::power:
        return p * std::pow(x, p - 1.0);
    }
    return 0.0;
  }

  double ddphi(double x) const {
    switch (kind) {
      case Kind::square:
        return 2.0;
      case Kind::xlogx:
        return x <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / x;
      case Kind::power:
        if (x <= 0.0 && p < 2.0) return std::numeric_limits<double>::infinity();
        return p * (p - 1.0) * std::pow(x, p - 2.0);
    }
    return 0.0;
  }

  // psi(x) = (phi(x) - phi(0)) / x
  double psi(double x) const {
    switch (kind) {
      case Kind::square:
        return x;
      case Kind::xlogx:
        return x <= 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x);
      case Kind::power:
        return std::pow(x, p - 1.0);
    }
    return 0.0;
  }

  double dpsi(double x) const {
    switch (kind) {
      case Kind::square:
        return 1.0;
      case Kind::xlogx:
        return x <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / x;
      case Kind::power:
        if (x <= 0.0 && p < 2.0) return std::numeric_limits<double>::infinity();
        return (p - 1.0) * std::pow(x, p - 2.0);
    }
    return 0.0;
  }
};

struct FiniteDistribution {
  std::vector<std::pair<double, double>> atoms;  // (value, weight)

  void validate(const PhiSpec& phi) const {
    if (atoms.empty()) throw std::invalid_argument("distribution: no atoms");
    double sum = 0.0;
    for (const auto& [z, w] : atoms) {
      if (!(w >= 0.0)) throw std::invalid_argument("distribution: negative weight");
      if (phi.nonneg_only() && z < 0.0)
        throw std::invalid_argument("distribution: negative atom under a nonnegative-only phi");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("distribution: weights sum to " + std::to_string(sum));
  }

  double mean() const {
    double s = 0.0;
    for (const auto& [z, w] : atoms) s += w * z;
    return s;
  }
};

// H_phi(Z) = E[phi(Z)] - phi(E[Z])
inline double phi_entropy(const FiniteDistribution& dist, const PhiSpec& phi) {
  dist.validate(phi);
  double ephi = 0.0;
  for (const auto& [z, w] : dist.atoms) ephi += w * phi.phi(z);
  return ephi - phi.phi(dist.mean());
}

struct CoupledAtom {
  double z = 0.0;
  double t = 0.0;
  double w = 0.0;
};

// E[(phi'(T) - phi'(E T))(Z - T) + phi(T)] - phi(E T). Always at most
// H_phi(marginal of Z); equality when T = Z atomwise. A T-atom at 0 with
// z != t drives the value to -infinity for xlogx (phi'(0) = -inf).
inline double duality_value(const std::vector<CoupledAtom>& joint, const PhiSpec& phi) {
  if (joint.empty()) throw std::invalid_argument("duality_value: empty coupling");
  double wsum = 0.0, et = 0.0;
  for (const auto& a : joint) {
    if (!(a.w >= 0.0)) throw std::invalid_argument("duality_value: negative weight");
    if (!(a.t >= 0.0)) throw std::invalid_argument("duality_value: negative T atom");
    if (phi.nonneg_only() && a.z < 0.0)
      throw std::invalid_argument("duality_value: negative Z atom under a nonnegative-only phi");
    wsum += a.w;
    et += a.w * a.t;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("duality_value: weights sum to " + std::to_string(wsum));
  if (!(et > 0.0))
    throw std::invalid_argument("duality_value: E[T] = 0 (pass T = 1 for the degenerate case)");

  const double dphi_et = phi.dphi(et);
  double acc = 0.0;
  for (const auto& a : joint) {
    if (a.w == 0.0) continue;
    if (a.z == a.t) {
      acc += a.w * phi.phi(a.t);
      continue;
    }
    const double dphi_t = phi.dphi(a.t);
    if (std::isinf(dphi_t)) return -std::numeric_limits<double>::infinity();
    acc += a.w * ((dphi_t - dphi_et) * (a.z - a.t) + phi.phi(a.t));
  }
  return acc - phi.phi(et);
}

struct SymmetrizationGaps {
  double gap38 = 0.0;  // (1/2) E[(Z - Z')(phi'(Z) - phi'(Z'))] - H_phi
  double gap39 = 0.0;  // (1/2) E[(Z - Z')(psi(Z) - psi(Z'))]  - H_phi
};

inline SymmetrizationGaps symmetrization_gaps(const FiniteDistribution& dist,
                                              const PhiSpec& phi) {
  const double h = phi_entropy(dist, phi);
  double r38 = 0.0, r39 = 0.0;
  const auto& a = dist.atoms;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double ww = a[i].second * a[j].second;
      if (ww == 0.0 || a[i].first == a[j].first) continue;
      const double dz = a[i].first - a[j].first;
      r38 += ww * dz * (phi.dphi(a[i].first) - phi.dphi(a[j].first));
      r39 += ww * dz * (phi.psi(a[i].first) - phi.psi(a[j].first));
    }
  }
  return SymmetrizationGaps{r38 - h, r39 - h};
}

// Tensorization over a product space: sum_i E[E[phi(Z)|X^(i)] -
// phi(E[Z|X^(i)])] - H_phi(Z); requires F >= 0.
inline double tensorization_gap(const ProductSpace& s, const Functional& f, const PhiSpec& phi) {
  const std::uint64_t total = s.enumerable_size();
  std::vector<double> zs(total), ws(total);
  {
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(s, flat, c, &w);
      const double z = f.eval(c);
      if (z < 0.0) throw std::invalid_argument("tensorization_gap: negative F value");
      zs[flat] = z;
      ws[flat] = w;
    }
  }
  double ez = 0.0, ephi = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) {
    ez += ws[k] * zs[k];
    ephi += ws[k] * phi.phi(zs[k]);
  }
  const double h = ephi - phi.phi(ez);

  // strides, row-major with the last coordinate fastest
  const std::size_t n = s.n();
  std::vector<std::uint64_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;)
    stride[i - 1] = stride[i] * s.marginals[i].support.size();

  double total_cond = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t sz = s.marginals[i].support.size();
    const std::uint64_t reduced = total / sz;
    std::vector<double> accw(reduced, 0.0), accz(reduced, 0.0), accphi(reduced, 0.0);
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      const std::uint64_t hi = flat / (stride[i] * sz);
      const std::uint64_t lo = flat % stride[i];
      const std::uint64_t red = hi * stride[i] + lo;
      accw[red] += ws[flat];
      accz[red] += ws[flat] * zs[flat];
      accphi[red] += ws[flat] * phi.phi(zs[flat]);
    }
    for (std::uint64_t r = 0; r < reduced; ++r) {
      if (accw[r] <= 0.0) continue;
      total_cond += accphi[r] - accw[r] * phi.phi(accz[r] / accw[r]);
    }
  }
  return total_cond - h;
}

// A differentiable wrapping f used by the phi-Sobolev checks.
struct WrapFn {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

enum class SobolevIneq { thm5_vplus, thm5_v, thm6_v, thm6_vplus, thm6_vminus };

namespace detail {

inline void check_monotone(const std::vector<double>& zs, const WrapFn& f, bool increasing) {
  for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
    const double a = f.value(zs[k]), b = f.value(zs[k + 1]);
    if (increasing ? (b < a - 1e-10) : (b > a + 1e-10))
      throw std::invalid_argument(increasing ? "hypothesis violated: f is not nondecreasing"
                                             : "hypothesis violated: f is not nonincreasing");
  }
}

inline void check_nonneg(const std::vector<double>& zs, const WrapFn& f) {
  for (double z : zs)
    if (f.value(z) < -1e-12)
      throw std::invalid_argument("hypothesis violated: f takes negative values");
}

// convexity of g on the realized grid via nondecreasing difference quotients
inline void check_convex(const std::vector<double>& zs,
                         const std::function<double(double)>& g, const char* what) {
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
    const double dz = zs[k + 1] - zs[k];
    if (dz <= 0.0) continue;
    const double slope = (g(zs[k + 1]) - g(zs[k])) / dz;
    if (slope < prev_slope - 1e-9 * (1.0 + std::abs(prev_slope)))
      throw std::invalid_argument(std::string("hypothesis violated: ") + what +
                                  " is not convex on the realized range");
    prev_slope = slope;
  }
}

}  // namespace detail

// RHS - H_phi(f(Z)) for the selected phi-Sobolev inequality. Monotonicity and
// convexity hypotheses are validated numerically on the realized support of Z
// and violations are rejected.
inline double sobolev_gap(const ProductSpace& s, const Functional& f_base, const PhiSpec& phi,
                          const WrapFn& wrap, SobolevIneq ineq) {
  const std::uint64_t total = s.enumerable_size();
  std::vector<IncrementProfile> prof(total);
  std::vector<double> ws(total);
  {
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(s, flat, c, &w);
      prof[flat] = profile_at(s, f_base, c);
      ws[flat] = w;
    }
  }
  std::vector<double> zs;
  zs.reserve(total);
  for (const auto& p : prof) zs.push_back(p.z);
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  const bool thm5 = (ineq == SobolevIneq::thm5_vplus || ineq == SobolevIneq::thm5_v);
  detail::check_nonneg(zs, wrap);
  detail::check_monotone(zs, wrap, thm5);
  if (ineq == SobolevIneq::thm5_v || ineq == SobolevIneq::thm6_v)
    detail::check_convex(zs, [&](double z) { return phi.dphi(wrap.value(z)); }, "phi' o f");
  else
    detail::check_convex(zs, [&](double z) { return phi.psi(wrap.value(z)); }, "psi o f");
  if (!thm5 || ineq == SobolevIneq::thm5_v) {
    for (const auto& p : prof)
      if (p.red_min < -1e-12)
        throw std::invalid_argument("hypothesis violated: Z_i <= Z fails on some configuration");
  }

  // H_phi of f(Z)
  double ef = 0.0, ephif = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) {
    const double fv = wrap.value(prof[k].z);
    ef += ws[k] * fv;
    ephif += ws[k] * phi.phi(fv);
  }
  const double h = ephif - phi.phi(ef);

  double rhs = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) {
    const IncrementProfile& p = prof[k];
    // thm6 evaluates the weight factor at z~ = min_i Z_i = z - max_i (z - Z_i)
    const double at = thm5 || ineq == SobolevIneq::thm6_vminus ? p.z : p.z - p.m_reduced;
    const double d = wrap.deriv(at);
    double vpart, weightfn;
    switch (ineq) {
      case SobolevIneq::thm5_vplus:
      case SobolevIneq::thm6_vplus:
        vpart = p.v_plus;
        weightfn = phi.dpsi(wrap.value(at));
        break;
      case SobolevIneq::thm5_v:
      case SobolevIneq::thm6_v:
        vpart = 0.5 * p.v;
        weightfn = phi.ddphi(wrap.value(at));
        break;
      case SobolevIneq::thm6_vminus:
      default:
        vpart = p.v_minus;
        weightfn = phi.dpsi(wrap.value(at));
        break;
    }
    if (d == 0.0 || vpart == 0.0) continue;
    rhs += ws[k] * vpart * d * d * weightfn;
  }
  return rhs - h;
}

enum class GeneralizedES { lemma3_v, lemma3_vplus, lemma3_vminus, lemma4, lemma5_v, lemma5_vplus };

// RHS - LHS of the selected generalized Efron-Stein moment inequality, all
// moments exact by enumeration.
inline double generalized_es_gap(const ProductSpace& s, const Functional& f, double q,
                                 double alpha, GeneralizedES which) {
  if (!(q >= 2.0)) throw std::invalid_argument("generalized_es_gap: requires q >= 2");
  if (!(alpha >= 0.5 * q && alpha <= q - 1.0))
    throw std::invalid_argument("generalized_es_gap: requires q/2 <= alpha <= q-1");

  const std::uint64_t total = s.enumerable_size();
  std::vector<IncrementProfile> prof(total);
  std::vector<double> ws(total);
  {
    Configuration c;
    double w;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      decode_config(s, flat, c, &w);
      prof[flat] = profile_at(s, f, c);
      ws[flat] = w;
    }
  }
  double ez = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) ez += ws[k] * prof[k].z;

  auto pos = [](double x) { return x > 0.0 ? x : 0.0; };
  double lhs = 0.0, e_alpha = 0.0, correction = 0.0;
  switch (which) {
    case GeneralizedES::lemma3_v:
      for (std::uint64_t k = 0; k < total; ++k) {
        const double u = pos(prof[k].z - ez);
        lhs += ws[k] * std::pow(u, q);
        e_alpha += ws[k] * std::pow(u, alpha);
        correction += ws[k] * prof[k].v * std::pow(u, q - 2.0);
      }
      correction *= 0.5 * q * (q - alpha);
      break;
    case GeneralizedES::lemma3_vplus:
      for (std::uint64_t k = 0; k < total; ++k) {
        const double u = pos(prof[k].z - ez);
        lhs += ws[k] * std::pow(u, q);
        e_alpha += ws[k] * std::pow(u, alpha);
        correction += ws[k] * prof[k].v_plus * std::pow(u, q - 2.0);
      }
      correction *= alpha * (q - alpha);
      break;
    case GeneralizedES::lemma3_vminus:
      for (std::uint64_t k = 0; k < total; ++k) {
        const double u = pos(ez - prof[k].z);
        lhs += ws[k] * std::pow(u, q);
        e_alpha += ws[k] * std::pow(u, alpha);
        correction += ws[k] * prof[k].v_minus * std::pow(u, q - 2.0);
      }
      correction *= alpha * (q - alpha);
      break;
    case GeneralizedES::lemma4:
      for (std::uint64_t k = 0; k < total; ++k) {
        const IncrementProfile& p = prof[k];
        if (p.z < -1e-12 || p.red_min < -1e-12 || p.m_reduced > p.z + 1e-12)
          throw std::invalid_argument("lemma4: requires 0 <= Z_i <= Z");
        lhs += ws[k] * std::pow(p.z, q);
        e_alpha += ws[k] * std::pow(p.z, alpha);
        correction += ws[k] * p.v * std::pow(p.z, q - 2.0);
      }
      correction *= 0.5 * q * (q - alpha);
      break;
    case GeneralizedES::lemma5_v:
      for (std::uint64_t k = 0; k < total; ++k) {
        const double u = pos(ez - prof[k].z);
        lhs += ws[k] * std::pow(u, q);
        e_alpha += ws[k] * std::pow(u, alpha);
        correction +=
            ws[k] * prof[k].v * std::pow(pos(ez + prof[k].m_reduced - prof[k].z), q - 2.0);
      }
      correction *= 0.5 * q * (q - alpha);
      break;
    case GeneralizedES::lemma5_vplus:
      for (std::uint64_t k = 0; k < total; ++k) {
        const double u = pos(ez - prof[k].z);
        lhs += ws[k] * std::pow(u, q);
        e_alpha += ws[k] * std::pow(u, alpha);
        correction +=
            ws[k] * prof[k].v_plus * std::pow(pos(ez + prof[k].m_resampled - prof[k].z), q - 2.0);
      }
      correction *= alpha * (q - alpha);
      break;
  }
  const double rhs = std::pow(e_alpha, q / alpha) + correction;
  return rhs - lhs;
}

}  // namespace momineq

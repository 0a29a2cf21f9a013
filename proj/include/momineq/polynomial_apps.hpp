#pragma once

// Multilinear suprema over product spaces: Rademacher chaos of order d with
// its partial injective-norm suprema W_k, nonnegative Boolean polynomials
// with their completion maxima M_k, the moment bounds built from both, and
// the triangle-count scenario over G(n, p) edge variables.
//
// W_1 has a closed form (a Euclidean norm per tensor), W_2 is a spectral
// norm obtained by power iteration with deterministic restarts, and W_k for
// k >= 3 falls back to alternating maximization, which only certifies a
// lower estimate of the supremum.

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

struct TensorEntry {
  std::vector<std::uint32_t> set;  // strictly increasing indices, size d
  double coeff = 0.0;
};

using SparseTensor = std::vector<TensorEntry>;

struct ChaosSpec {
  std::size_t n = 0;  // coordinate count
  std::size_t d = 0;  // order
  std::vector<SparseTensor> tensors;
  bool boolean_mode = false;  // no absolute value; coefficients must be >= 0
};

namespace detail {

inline void check_tensor(const SparseTensor& t, std::size_t d, std::size_t n, bool boolean_mode) {
  for (const auto& e : t) {
    if (e.set.size() != d) throw std::invalid_argument("tensor entry: index set size != d");
    for (std::size_t j = 0; j < e.set.size(); ++j) {
      if (e.set[j] >= n) throw std::invalid_argument("tensor entry: index out of range");
      if (j + 1 < e.set.size() && !(e.set[j] < e.set[j + 1]))
        throw std::invalid_argument("tensor entry: indices must be strictly increasing");
    }
    if (boolean_mode && e.coeff < 0.0)
      throw std::invalid_argument("boolean tensor: negative coefficient");
  }
}

inline double entry_product(const TensorEntry& e, const Configuration& c,
                            std::uint32_t skip = UINT32_MAX) {
  double p = e.coeff;
  for (std::uint32_t i : e.set) {
    if (i == skip) continue;
    p *= c.values[i];
  }
  return p;
}

}  // namespace detail

inline ChaosSpec make_chaos(std::size_t n, std::size_t d, std::vector<SparseTensor> tensors,
                            bool boolean_mode) {
  if (n == 0 || d == 0 || d > n) throw std::invalid_argument("chaos spec: requires 0 < d <= n");
  if (tensors.empty()) throw std::invalid_argument("chaos spec: empty coefficient set");
  for (const auto& t : tensors) detail::check_tensor(t, d, n, boolean_mode);
  ChaosSpec s;
  s.n = n;
  s.d = d;
  s.tensors = std::move(tensors);
  s.boolean_mode = boolean_mode;
  return s;
}

// Z = sup_t |sum_I t_I prod_{i in I} x_i| (chaos) or without the absolute
// value (boolean mode).
inline double chaos_value(const ChaosSpec& spec, const Configuration& c) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : spec.tensors) {
    double s = 0.0;
    for (const auto& e : t) s += detail::entry_product(e, c);
    best = std::max(best, spec.boolean_mode ? s : std::abs(s));
  }
  return best;
}

inline double boolean_value(const ChaosSpec& spec, const Configuration& c) {
  if (!spec.boolean_mode) throw std::invalid_argument("boolean_value: spec is not boolean");
  return chaos_value(spec, c);
}

inline Functional chaos_functional(const ChaosSpec& spec) {
  Functional f;
  f.eval = [spec](const Configuration& c) { return chaos_value(spec, c); };
  // dropping coordinate i zeroes every term containing it
  f.reduction = ReductionRule::user([spec](std::size_t i, const Configuration& c) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : spec.tensors) {
      double s = 0.0;
      for (const auto& e : t) {
        bool contains = false;
        for (std::uint32_t j : e.set)
          if (j == i) contains = true;
        if (!contains) s += detail::entry_product(e, c);
      }
      best = std::max(best, spec.boolean_mode ? s : std::abs(s));
    }
    return best;
  });
  return f;
}

struct WValue {
  double value = 0.0;
  bool certified = false;
  enum class Method { closed_form, power_iteration, alternating } method = Method::closed_form;
};

namespace detail {

// collects c_S = sum over entries I >= S of t_I prod_{j in I \ S} x_j
// for all k-subsets S of entry index sets
inline std::map<std::vector<std::uint32_t>, double> contract_sets(const SparseTensor& t,
                                                                  const Configuration& c,
                                                                  std::size_t k) {
  std::map<std::vector<std::uint32_t>, double> acc;
  std::vector<std::uint32_t> sel(k);
  for (const auto& e : t) {
    const std::size_t d = e.set.size();
    // iterate k-subsets of e.set by index combination
    std::vector<std::size_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = j;
    while (true) {
      double prod = e.coeff;
      std::size_t take = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (take < k && idx[take] == j) {
          sel[take] = e.set[j];
          ++take;
        } else {
          prod *= c.values[e.set[j]];
        }
      }
      acc[sel] += prod;
      // next combination
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (idx[pos] != pos + d - k) break;
      }
      if (idx[pos] == pos + d - k) break;
      ++idx[pos];
      for (std::size_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return acc;
}

// cyclic Jacobi sweeps; used when power iteration stalls on nearly degenerate
// spectra. Certified when the remaining off-diagonal mass is negligible.
inline std::pair<double, bool> jacobi_spectral_norm(std::vector<std::vector<double>> a) {
  const std::size_t m = a.size();
  double frob = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) frob += a[i][j] * a[i][j];
  frob = std::sqrt(frob);
  if (frob == 0.0) return {0.0, true};
  auto off_norm = [&] {
    double off = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) off += 2.0 * a[i][j] * a[i][j];
    return std::sqrt(off);
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= 1e-13 * frob) break;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double tau = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  double sigma = 0.0;
  for (std::size_t i = 0; i < m; ++i) sigma = std::max(sigma, std::abs(a[i][i]));
  // eigenvalues lie within the off-diagonal norm of the diagonal entries
  return {sigma, off_norm() <= 1e-9 * std::max(1.0, sigma)};
}

// power iteration on B^2 for a symmetric dense matrix; returns (sigma,
// residual criterion satisfied)
inline std::pair<double, bool> spectral_norm(const std::vector<std::vector<double>>& b,
                                             std::uint64_t seed) {
  const std::size_t m = b.size();
  if (m == 0) return {0.0, true};
  auto matvec = [&](const std::vector<double>& x) {
    std::vector<double> y(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      for (std::size_t cidx = 0; cidx < m; ++cidx) s += b[r][cidx] * x[cidx];
      y[r] = s;
    }
    return y;
  };
  auto norm2 = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };

  double best = 0.0;
  bool best_ok = true;
  const std::size_t restarts = m + 8;
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> v(m, 0.0);
    if (r < m) {
      v[r] = 1.0;
    } else {
      for (std::size_t i = 0; i < m; ++i)
        v[i] = 2.0 * rng::uniform01(rng::key(seed, r, i, 11)) - 1.0;
    }
    double nv = norm2(v);
    if (nv == 0.0) continue;
    for (double& x : v) x /= nv;
    double sigma = 0.0, lambda = 0.0, res = 0.0;
    for (int it = 0; it < 5000; ++it) {
      auto bv = matvec(v);
      sigma = norm2(bv);
      if (sigma == 0.0) {
        lambda = res = 0.0;
        break;
      }
      auto b2v = matvec(bv);
      lambda = 0.0;
      for (std::size_t i = 0; i < m; ++i) lambda += v[i] * b2v[i];
      res = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double dd = b2v[i] - lambda * v[i];
        res += dd * dd;
      }
      res = std::sqrt(res);
      if (res <= 1e-12 * std::max(1.0, lambda)) break;
      const double nb2 = norm2(b2v);
      if (nb2 == 0.0) break;
      for (std::size_t i = 0; i < m; ++i) v[i] = b2v[i] / nb2;
    }
    const bool ok = res <= 1e-9 * std::max(1.0, lambda);
    if (sigma > best) {
      best = sigma;
      best_ok = ok;
    }
  }
  if (!best_ok) {
    // nearly degenerate |eigenvalues| stall the iteration; Jacobi settles it
    auto [sj, okj] = jacobi_spectral_norm(b);
    return {std::max(best, sj), okj};
  }
  return {best, best_ok};
}

// alternating maximization of the symmetric multilinear form given by c_S
// over k unit vectors; reports a lower estimate of the supremum
inline double alternating_max(const std::map<std::vector<std::uint32_t>, double>& csets,
                              std::size_t k, const std::vector<std::uint32_t>& active,
                              std::uint64_t seed) {
  const std::size_t m = active.size();
  if (m == 0 || csets.empty()) return 0.0;
  std::map<std::uint32_t, std::size_t> pos;
  for (std::size_t i = 0; i < m; ++i) pos[active[i]] = i;

  // permutations of each S, precomputed as position tuples
  struct Term {
    std::vector<std::size_t> slots;  // slots[h] = dense index assigned to slot h
    double coeff;
  };
  std::vector<Term> terms;
  for (const auto& [s, coeff] : csets) {
    if (coeff == 0.0) continue;
    std::vector<std::size_t> idx;
    for (std::uint32_t v : s) idx.push_back(pos[v]);
    std::sort(idx.begin(), idx.end());
    do {
      terms.push_back(Term{idx, coeff});
    } while (std::next_permutation(idx.begin(), idx.end()));
  }

  double best = 0.0;
  for (std::size_t r = 0; r < 32; ++r) {
    std::vector<std::vector<double>> alpha(k, std::vector<double>(m, 0.0));
    for (std::size_t h = 0; h < k; ++h) {
      if (r == 0) {
        for (std::size_t i = 0; i < m; ++i) alpha[h][i] = 1.0 / std::sqrt(double(m));
      } else if (r <= m) {
        alpha[h][r - 1] = 1.0;
      } else {
        double nv = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha[h][i] = 2.0 * rng::uniform01(rng::key(seed, r, h, i)) - 1.0;
          nv += alpha[h][i] * alpha[h][i];
        }
        nv = std::sqrt(nv);
        if (nv == 0.0) continue;
        for (double& x : alpha[h]) x /= nv;
      }
    }
    double value = 0.0;
    for (int it = 0; it < 500; ++it) {
      double cycle_value = 0.0;
      for (std::size_t h = 0; h < k; ++h) {
        std::vector<double> grad(m, 0.0);
        for (const auto& t : terms) {
          double prod = t.coeff;
          for (std::size_t h2 = 0; h2 < k; ++h2) {
            if (h2 == h) continue;
            prod *= alpha[h2][t.slots[h2]];
          }
          grad[t.slots[h]] += prod;
        }
        double ng = 0.0;
        for (double g : grad) ng += g * g;
        ng = std::sqrt(ng);
        if (ng == 0.0) {
          cycle_value = 0.0;
          continue;
        }
        for (std::size_t i = 0; i < m; ++i) alpha[h][i] = grad[i] / ng;
        cycle_value = ng;  // F after this update
      }
      if (std::abs(cycle_value - value) <= 1e-10 * std::max(1.0, cycle_value)) {
        value = cycle_value;
        break;
      }
      value = cycle_value;
    }
    best = std::max(best, std::abs(value));
  }
  return best;
}

}  // namespace detail

// W_k at a configuration: the supremum over tensors and k unit vectors of
// the partially contracted form.
inline WValue chaos_W(const ChaosSpec& spec, const Configuration& c, std::size_t k,
                      std::uint64_t seed = 0x5EED) {
  if (k == 0 || k > spec.d) throw std::invalid_argument("chaos_W: requires 1 <= k <= d");
  WValue out;
  if (k == 1) {
    out.method = WValue::Method::closed_form;
    out.certified = true;
    double best = 0.0;
    for (const auto& t : spec.tensors) {
      const auto g = detail::contract_sets(t, c, 1);
      double l2 = 0.0;
      for (const auto& [s, v] : g) l2 += v * v;
      best = std::max(best, std::sqrt(l2));
    }
    out.value = best;
    return out;
  }
  if (k == 2) {
    out.method = WValue::Method::power_iteration;
    out.certified = true;
    double best = 0.0;
    for (std::size_t ti = 0; ti < spec.tensors.size(); ++ti) {
      const auto csets = detail::contract_sets(spec.tensors[ti], c, 2);
      std::vector<std::uint32_t> active;
      for (const auto& [s, v] : csets)
        for (std::uint32_t i : s) active.push_back(i);
      std::sort(active.begin(), active.end());
      active.erase(std::unique(active.begin(), active.end()), active.end());
      std::map<std::uint32_t, std::size_t> pos;
      for (std::size_t i = 0; i < active.size(); ++i) pos[active[i]] = i;
      std::vector<std::vector<double>> b(active.size(), std::vector<double>(active.size(), 0.0));
      for (const auto& [s, v] : csets) {
        const std::size_t u = pos[s[0]], w = pos[s[1]];
        b[u][w] += v;
        b[w][u] += v;
      }
      auto [sigma, ok] = detail::spectral_norm(b, rng::derive_seed(seed, ti));
      best = std::max(best, sigma);
      out.certified = out.certified && ok;
    }
    out.value = best;
    return out;
  }
  out.method = WValue::Method::alternating;
  out.certified = false;
  double best = 0.0;
  for (std::size_t ti = 0; ti < spec.tensors.size(); ++ti) {
    const auto csets = detail::contract_sets(spec.tensors[ti], c, k);
    std::vector<std::uint32_t> active;
    for (const auto& [s, v] : csets)
      for (std::uint32_t i : s) active.push_back(i);
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    best = std::max(best, detail::alternating_max(csets, k, active, rng::derive_seed(seed, ti)));
  }
  out.value = best;
  return out;
}

// All W_k of one configuration. W_d never depends on the configuration; for
// k >= 3 the value is an uncertified lower estimate.
struct WProfile {
  std::vector<double> values;   // W_1 .. W_d
  std::vector<bool> certified;  // per k
  std::vector<WValue::Method> methods;
};

inline WProfile chaos_w_profile(const ChaosSpec& spec, const Configuration& c,
                                std::uint64_t seed = 0x5EED) {
  WProfile out;
  for (std::size_t k = 1; k <= spec.d; ++k) {
    const WValue w = chaos_W(spec, c, k, seed);
    out.values.push_back(w.value);
    out.certified.push_back(w.certified);
    out.methods.push_back(w.method);
  }
  return out;
}

// M_k = max_{J in I_{n,d-k}} sup_t sum_{I >= J} t_I prod_{j in I \ J} x_j,
// 0 <= k <= d-1; Boolean mode only. Empty products count as 1, so M_0 is the
// largest coefficient regardless of the configuration.
inline double boolean_M(const ChaosSpec& spec, const Configuration& c, std::size_t k) {
  if (!spec.boolean_mode) throw std::invalid_argument("boolean_M: spec is not boolean");
  if (k >= spec.d) throw std::invalid_argument("boolean_M: requires 0 <= k <= d-1");
  double best = 0.0;  // untouched J contribute an empty (zero) sum
  for (const auto& t : spec.tensors) {
    const auto acc = detail::contract_sets(t, c, spec.d - k);
    for (const auto& [s, v] : acc) best = std::max(best, v);
  }
  return best;
}

// Theorem-14 style bounds. ew holds E[W_1..W_d]; the tight form uses the
// deterministic W_d in its last term.
inline BoundResult chaos_moment_bound_tight(double q, std::span<const double> ew, double wd,
                                            std::size_t d) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm14: requires q >= 2");
  if (ew.size() != d || d == 0) throw std::invalid_argument("thm14: needs E[W_1..W_d]");
  const double kappa = constant("kappa").value;
  const double bigk = constant("K").value;
  BoundResult r;
  r.theorem = "thm14";
  r.q = q;
  r.side = BoundResult::Side::upper_plus;
  double s = 0.0;
  for (std::size_t j = 1; j + 1 <= d; ++j) s += std::pow(4.0 * kappa * q, 0.5 * double(j)) * ew[j - 1];
  s += std::pow(4.0 * kappa, 0.5 * double(d - 1)) * std::sqrt(2.0 * bigk) *
       std::pow(q, 0.5 * double(d)) * wd;
  r.value = s;
  r.constants_used = {{"kappa", kappa}, {"K", bigk}};
  return r;
}

inline BoundResult chaos_moment_bound_relaxed(double q, std::span<const double> ew,
                                              std::size_t d) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm14_relaxed: requires q >= 2");
  if (ew.size() != d || d == 0) throw std::invalid_argument("thm14_relaxed: needs E[W_1..W_d]");
  const double kappa = constant("kappa").value;
  BoundResult r;
  r.theorem = "thm14_relaxed";
  r.q = q;
  r.side = BoundResult::Side::upper_plus;
  double s = 0.0;
  for (std::size_t j = 1; j <= d; ++j) s += std::pow(4.0 * kappa * q, 0.5 * double(j)) * ew[j - 1];
  r.value = s;
  r.constants_used = {{"kappa", kappa}};
  return r;
}

// ||Z||_q <= (sqrt(4 kappa q d^{d+1}) - 1) / (sqrt(4 kappa q d) - 1) ||Z||_2
inline double bonami_bound(double q, double norm2_z, std::size_t d) {
  if (!(q >= 2.0)) throw std::invalid_argument("bonami_bound: requires q >= 2");
  if (norm2_z < 0.0) throw std::invalid_argument("bonami_bound: negative norm");
  const double kappa = constant("kappa").value;
  const double dd = static_cast<double>(d);
  return (std::sqrt(4.0 * kappa * q * std::pow(dd, dd + 1.0)) - 1.0) /
         (std::sqrt(4.0 * kappa * q * dd) - 1.0) * norm2_z;
}

// 2 sum_{j=1..d} { (kappa q)^{j/2} sqrt(d!/(d-j)!) sqrt(EZ EM_{d-j})
//                 + (kappa q)^j (d!/(d-j)!) EM_{d-j} }
inline BoundResult boolean_moment_bound(double q, double ez, std::span<const double> em,
                                        std::size_t d) {
  if (!(q >= 2.0)) throw std::invalid_argument("thm15: requires q >= 2");
  if (em.size() != d || d == 0) throw std::invalid_argument("thm15: needs E[M_0..M_{d-1}]");
  if (ez < 0.0) throw std::invalid_argument("thm15: negative E[Z]");
  const double kappa = constant("kappa").value;
  double falling = 1.0;  // d!/(d-j)! accumulated as j grows
  double s = 0.0;
  for (std::size_t j = 1; j <= d; ++j) {
    falling *= static_cast<double>(d - j + 1);
    const double emj = em[d - j];
    s += std::pow(kappa * q, 0.5 * double(j)) * std::sqrt(falling) * std::sqrt(ez * emj) +
         std::pow(kappa * q, double(j)) * falling * emj;
  }
  BoundResult r;
  r.theorem = "thm15";
  r.q = q;
  r.side = BoundResult::Side::upper_plus;
  r.value = 2.0 * s;
  r.constants_used = {{"kappa", kappa}};
  return r;
}

// Triangle counting over G(n, p): edge coordinates are Bernoulli(p), Z is the
// number of triangles (a Boolean polynomial of order 3 over edges).
struct TriangleScenario {
  std::size_t nv = 0;
  double p = 0.0;

  std::size_t n_edges() const { return nv * (nv - 1) / 2; }

  std::size_t edge_rank(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    return u * (2 * nv - u - 1) / 2 + (v - u - 1);
  }

  ProductSpace space() const { return bernoulli(n_edges(), p); }

  ChaosSpec spec() const {
    SparseTensor t;
    for (std::size_t u = 0; u < nv; ++u)
      for (std::size_t v = u + 1; v < nv; ++v)
        for (std::size_t w = v + 1; w < nv; ++w) {
          TensorEntry e;
          e.set = {static_cast<std::uint32_t>(edge_rank(u, v)),
                   static_cast<std::uint32_t>(edge_rank(u, w)),
                   static_cast<std::uint32_t>(edge_rank(v, w))};
          std::sort(e.set.begin(), e.set.end());
          e.coeff = 1.0;
          t.push_back(e);
        }
    return make_chaos(n_edges(), 3, {std::move(t)}, true);
  }

  // E[Z] = C(n,3) p^3
  double mean_formula() const {
    const double n = static_cast<double>(nv);
    return n * (n - 1.0) * (n - 2.0) / 6.0 * p * p * p;
  }

  // E[M_1] <= 2 (log n + n p^2)
  double em1_formula() const {
    return 2.0 * (std::log(static_cast<double>(nv)) + static_cast<double>(nv) * p * p);
  }

  // M_1 = max over edges (u,v) of the common-neighbour count
  double m1_value(const Configuration& c) const {
    double best = 0.0;
    for (std::size_t u = 0; u < nv; ++u)
      for (std::size_t v = u + 1; v < nv; ++v) {
        double cnt = 0.0;
        for (std::size_t w = 0; w < nv; ++w) {
          if (w == u || w == v) continue;
          cnt += c.values[edge_rank(u, w)] * c.values[edge_rank(v, w)];
        }
        best = std::max(best, cnt);
      }
    return best;
  }

  // number of triangles all of whose edges lie in fewer than n p triangles
  double good_count(const Configuration& c) const {
    std::vector<double> tri_through(n_edges(), 0.0);
    for (std::size_t u = 0; u < nv; ++u)
      for (std::size_t v = u + 1; v < nv; ++v)
        for (std::size_t w = v + 1; w < nv; ++w) {
          const double t = c.values[edge_rank(u, v)] * c.values[edge_rank(u, w)] *
                           c.values[edge_rank(v, w)];
          if (t != 0.0) {
            tri_through[edge_rank(u, v)] += 1.0;
            tri_through[edge_rank(u, w)] += 1.0;
            tri_through[edge_rank(v, w)] += 1.0;
          }
        }
    const double cap = static_cast<double>(nv) * p;
    double good = 0.0;
    for (std::size_t u = 0; u < nv; ++u)
      for (std::size_t v = u + 1; v < nv; ++v)
        for (std::size_t w = v + 1; w < nv; ++w) {
          const std::size_t e1 = edge_rank(u, v), e2 = edge_rank(u, w), e3 = edge_rank(v, w);
          if (c.values[e1] * c.values[e2] * c.values[e3] == 0.0) continue;
          if (tri_through[e1] < cap && tri_through[e2] < cap && tri_through[e3] < cap)
            good += 1.0;
        }
    return good;
  }

  Functional count_functional() const {
    const ChaosSpec s = spec();
    return chaos_functional(s);
  }

  Functional m1_functional() const {
    TriangleScenario self = *this;
    Functional f;
    f.eval = [self](const Configuration& c) { return self.m1_value(c); };
    f.reduction = ReductionRule::baseline({0.0});
    return f;
  }

  Functional good_functional() const {
    TriangleScenario self = *this;
    Functional f;
    f.eval = [self](const Configuration& c) { return self.good_count(c); };
    f.reduction = ReductionRule::baseline({0.0});
    return f;
  }
};

inline TriangleScenario triangle_scenario(std::size_t n_vertices, double p) {
  if (n_vertices < 3) throw std::invalid_argument("triangle_scenario: requires n >= 3");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("triangle_scenario: requires p in (0,1)");
  return TriangleScenario{n_vertices, p};
}

// sqrt(kappa) [ sqrt(3 q n p EZg) + 3 q n p / sqrt(2) ]
inline double triangle_good_bound(std::size_t n_vertices, double p, double q, double ez_good) {
  if (!(q >= 2.0)) throw std::invalid_argument("triangle_good_bound: requires q >= 2");
  if (ez_good < 0.0) throw std::invalid_argument("triangle_good_bound: negative E[Z^g]");
  const double kappa = constant("kappa").value;
  const double np = static_cast<double>(n_vertices) * p;
  return std::sqrt(kappa) *
         (std::sqrt(3.0 * q * np * ez_good) + 3.0 * q * np / std::sqrt(2.0));
}

// ||M_1||_q <= n ^ (E[M_1] + q - 1)
inline double triangle_m1_moment_bound(std::size_t n_vertices, double q, double em1) {
  if (!(q >= 1.0) || q != std::floor(q))
    throw std::invalid_argument("triangle_m1_moment_bound: requires integer q >= 1");
  if (em1 < 0.0) throw std::invalid_argument("triangle_m1_moment_bound: negative E[M_1]");
  return std::min(static_cast<double>(n_vertices), em1 + q - 1.0);
}

}  // namespace momineq

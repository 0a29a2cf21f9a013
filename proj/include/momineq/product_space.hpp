#pragma once

// Product distributions of independent coordinates: exact enumeration over
// finite supports and counter-based seeded sampling. Enumeration visits
// configurations in row-major order (last coordinate fastest); reductions go
// through the blockwise utilities so sums are bit-identical for any thread
// count.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "momineq/parallel.hpp"
#include "momineq/rng.hpp"

namespace momineq {

struct EnumerationUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Marginal {
  enum class Kind { finite, sampler };
  enum class Sampler { none, uniform, gaussian };

  Kind kind = Kind::finite;
  std::vector<double> support;  // finite kind
  std::vector<double> probs;    // finite kind
  Sampler sampler = Sampler::none;
  double par0 = 0.0;  // uniform: a; gaussian: mu
  double par1 = 1.0;  // uniform: b; gaussian: sigma

  bool is_finite() const { return kind == Kind::finite; }

  static Marginal finite_support(std::vector<double> support, std::vector<double> probs) {
    Marginal m;
    m.kind = Kind::finite;
    m.support = std::move(support);
    m.probs = std::move(probs);
    m.validate();
    return m;
  }

  static Marginal rademacher() { return finite_support({-1.0, 1.0}, {0.5, 0.5}); }

  static Marginal bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p must be in [0,1]");
    return finite_support({0.0, 1.0}, {1.0 - p, p});
  }

  static Marginal uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
    Marginal m;
    m.kind = Kind::sampler;
    m.sampler = Sampler::uniform;
    m.par0 = a;
    m.par1 = b;
    return m;
  }

  static Marginal gaussian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: requires sigma > 0");
    Marginal m;
    m.kind = Kind::sampler;
    m.sampler = Sampler::gaussian;
    m.par0 = mu;
    m.par1 = sigma;
    return m;
  }

  void validate() const {
    if (kind == Kind::sampler) {
      if (sampler == Sampler::none) throw std::invalid_argument("marginal: sampler unset");
      return;
    }
    if (support.empty()) throw std::invalid_argument("marginal: empty support");
    if (support.size() != probs.size())
      throw std::invalid_argument("marginal: support/probs size mismatch");
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw std::invalid_argument("marginal: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("marginal: probabilities sum to " + std::to_string(sum));
    for (std::size_t a = 0; a < support.size(); ++a)
      for (std::size_t b = a + 1; b < support.size(); ++b)
        if (support[a] == support[b])
          throw std::invalid_argument("marginal: duplicate support value");
  }

  double mean() const {
    require_finite("mean");
    double s = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) s += probs[k] * support[k];
    return s;
  }

  double moment2() const {
    require_finite("moment2");
    double s = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) s += probs[k] * support[k] * support[k];
    return s;
  }

  // Coordinate i of sample j; finite kind also reports the support index.
  double sample(std::uint64_t seed, std::uint64_t j, std::uint64_t i,
                std::size_t* index_out = nullptr) const {
    if (kind == Kind::finite) {
      const double u = rng::uniform01(rng::key(seed, j, i, 0));
      double acc = 0.0;
      std::size_t k = 0;
      for (; k + 1 < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) break;
      }
      if (index_out) *index_out = k;
      return support[k];
    }
    if (index_out) *index_out = static_cast<std::size_t>(-1);
    if (sampler == Sampler::uniform)
      return par0 + (par1 - par0) * rng::uniform01(rng::key(seed, j, i, 0));
    return par0 + par1 * rng::gaussian(rng::key(seed, j, i, 0), rng::key(seed, j, i, 1));
  }

 private:
  void require_finite(const char* what) const {
    if (kind != Kind::finite)
      throw EnumerationUnavailable(std::string("marginal: ") + what + " needs a finite marginal");
  }
};

struct Configuration {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<double> values;
  std::vector<std::size_t> indices;  // support indices; npos where not applicable
};

inline std::uint64_t default_enumeration_cap() {
  if (const char* env = std::getenv("MOMINEQ_ENUM_CAP")) {
    const unsigned long long v = std::strtoull(env, nullptr, 10);
    if (v > 0) return v;
  }
  return std::uint64_t(1) << 24;
}

struct ProductSpace {
  std::vector<Marginal> marginals;
  std::uint64_t enumeration_cap = default_enumeration_cap();

  std::size_t n() const { return marginals.size(); }

  bool all_finite() const {
    for (const auto& m : marginals)
      if (!m.is_finite()) return false;
    return true;
  }

  // Total configuration count; throws when a sampler coordinate is present
  // or the count exceeds the enumeration cap.
  std::uint64_t enumerable_size() const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      const auto& m = marginals[i];
      if (!m.is_finite())
        throw EnumerationUnavailable("enumeration unavailable: coordinate " + std::to_string(i) +
                                     " is sampler-kind");
      const std::uint64_t s = m.support.size();
      if (total > enumeration_cap / s) total = enumeration_cap + 1;
      else total *= s;
      if (total > enumeration_cap)
        throw EnumerationUnavailable(
            "enumeration unavailable: configuration count exceeds cap " +
            std::to_string(enumeration_cap) + " at coordinate " + std::to_string(i));
    }
    return total;
  }
};

inline ProductSpace build_space(std::vector<Marginal> ms) {
  if (ms.empty()) throw std::invalid_argument("build_space: empty marginal list");
  for (const auto& m : ms) m.validate();
  ProductSpace s;
  s.marginals = std::move(ms);
  return s;
}

inline ProductSpace rademacher(std::size_t n) {
  return build_space(std::vector<Marginal>(n, Marginal::rademacher()));
}

inline ProductSpace bernoulli(std::size_t n, double p) {
  return build_space(std::vector<Marginal>(n, Marginal::bernoulli(p)));
}

// Decodes flat index -> configuration (row-major, last coordinate fastest)
// and its product weight.
inline void decode_config(const ProductSpace& s, std::uint64_t flat, Configuration& c,
                          double* weight) {
  const std::size_t n = s.n();
  c.values.resize(n);
  c.indices.resize(n);
  double w = 1.0;
  for (std::size_t r = n; r-- > 0;) {
    const auto& m = s.marginals[r];
    const std::uint64_t sz = m.support.size();
    const std::size_t k = static_cast<std::size_t>(flat % sz);
    flat /= sz;
    c.indices[r] = k;
    c.values[r] = m.support[k];
    w *= m.probs[k];
  }
  if (weight) *weight = w;
}

// Sequential enumeration; fn(config, weight).
template <class Fn>
void for_each_outcome(const ProductSpace& s, Fn&& fn) {
  const std::uint64_t total = s.enumerable_size();
  Configuration c;
  double w;
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    decode_config(s, flat, c, &w);
    fn(static_cast<const Configuration&>(c), w);
  }
}

// Blockwise enumeration reduce; fn(config, weight, acc) adds into acc.
template <class Fn>
std::vector<double> enumerate_reduce(const ProductSpace& s, std::size_t width, Fn&& fn) {
  const std::uint64_t total = s.enumerable_size();
  const std::uint64_t nblocks = (total + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partials(nblocks * width, 0.0);
  run_blocks(nblocks, [&](std::uint64_t b) {
    std::span<double> acc(partials.data() + b * width, width);
    Configuration c;
    double w;
    const std::uint64_t end = std::min(total, (b + 1) * kReduceBlock);
    for (std::uint64_t flat = b * kReduceBlock; flat < end; ++flat) {
      decode_config(s, flat, c, &w);
      fn(static_cast<const Configuration&>(c), w, acc);
    }
  });
  std::vector<double> out(width, 0.0);
  for (std::uint64_t b = 0; b < nblocks; ++b)
    for (std::size_t k = 0; k < width; ++k) out[k] += partials[b * width + k];
  return out;
}

// Blockwise enumeration max; fn(config, weight, acc) maxes into acc.
template <class Fn>
std::vector<double> enumerate_reduce_max(const ProductSpace& s, std::size_t width, Fn&& fn) {
  const std::uint64_t total = s.enumerable_size();
  const double lo = -std::numeric_limits<double>::infinity();
  const std::uint64_t nblocks = (total + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partials(nblocks * width, lo);
  run_blocks(nblocks, [&](std::uint64_t b) {
    std::span<double> acc(partials.data() + b * width, width);
    Configuration c;
    double w;
    const std::uint64_t end = std::min(total, (b + 1) * kReduceBlock);
    for (std::uint64_t flat = b * kReduceBlock; flat < end; ++flat) {
      decode_config(s, flat, c, &w);
      fn(static_cast<const Configuration&>(c), w, acc);
    }
  });
  std::vector<double> out(width, lo);
  for (std::uint64_t b = 0; b < nblocks; ++b)
    for (std::size_t k = 0; k < width; ++k) out[k] = std::max(out[k], partials[b * width + k]);
  return out;
}

// Sample j of the space under the given seed; coordinate i draws from the
// substream keyed by (seed, j, i).
inline Configuration sample_config(const ProductSpace& s, std::uint64_t seed, std::uint64_t j) {
  const std::size_t n = s.n();
  Configuration c;
  c.values.resize(n);
  c.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    c.values[i] = s.marginals[i].sample(seed, j, i, &c.indices[i]);
  return c;
}

}  // namespace momineq

#pragma once

// Shared test fixtures: small functionals over product spaces.

#include <algorithm>
#include <memory>
#include <vector>

#include "momineq/increments.hpp"
#include "momineq/product_space.hpp"

namespace testutil {

using namespace momineq;

inline Functional weighted_sum(std::vector<double> a) {
  Functional f;
  auto weights = std::make_shared<std::vector<double>>(std::move(a));
  f.eval = [weights](const Configuration& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i) s += (*weights)[i] * c.values[i];
    return s;
  };
  f.reduction = ReductionRule::user([weights](std::size_t i, const Configuration& c) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.values.size(); ++j)
      if (j != i) s += (*weights)[j] * c.values[j];
    return s;
  });
  return f;
}

inline Functional max_functional() {
  Functional f;
  f.eval = [](const Configuration& c) {
    return *std::max_element(c.values.begin(), c.values.end());
  };
  f.reduction = ReductionRule::drop_to_infimum();
  return f;
}

inline Functional constant_functional(double v) {
  Functional f;
  f.eval = [v](const Configuration&) { return v; };
  f.reduction = ReductionRule::drop_to_infimum();
  return f;
}

// seeded table over the enumerated configurations, values in [0,1) or [-1,1)
inline Functional table_functional(const ProductSpace& s, std::uint64_t seed, bool nonneg) {
  const std::uint64_t total = s.enumerable_size();
  auto table = std::make_shared<std::vector<double>>(total);
  for (std::uint64_t k = 0; k < total; ++k) {
    const double u = rng::uniform01(rng::key(seed, k, 0, 99));
    (*table)[k] = nonneg ? u : 2.0 * u - 1.0;
  }
  auto sizes = std::make_shared<std::vector<std::size_t>>();
  for (const auto& m : s.marginals) sizes->push_back(m.support.size());
  Functional f;
  f.eval = [table, sizes](const Configuration& c) {
    std::uint64_t flat = 0;
    for (std::size_t i = 0; i < c.indices.size(); ++i) flat = flat * (*sizes)[i] + c.indices[i];
    return (*table)[flat];
  };
  f.reduction = ReductionRule::drop_to_infimum();
  return f;
}

}  // namespace testutil

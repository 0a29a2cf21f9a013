#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "momineq/increments.hpp"

using namespace momineq;

namespace {

Functional weighted_sum(std::vector<double> a) {
  Functional f;
  auto weights = std::make_shared<std::vector<double>>(std::move(a));
  f.eval = [weights](const Configuration& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i) s += (*weights)[i] * c.values[i];
    return s;
  };
  // drop-the-term reduction
  f.reduction = ReductionRule::user([weights](std::size_t i, const Configuration& c) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.values.size(); ++j)
      if (j != i) s += (*weights)[j] * c.values[j];
    return s;
  });
  return f;
}

Functional max_functional() {
  Functional f;
  f.eval = [](const Configuration& c) { return *std::max_element(c.values.begin(), c.values.end()); };
  f.reduction = ReductionRule::drop_to_infimum();
  return f;
}

Functional constant_functional(double v) {
  Functional f;
  f.eval = [v](const Configuration&) { return v; };
  f.reduction = ReductionRule::drop_to_infimum();
  return f;
}

// seeded table functional over the enumerated configurations
Functional table_functional(const ProductSpace& s, std::uint64_t seed, bool nonneg) {
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

}  // namespace

TEST_CASE("khinchine profile at (+1,-1)") {
  auto space = rademacher(2);
  auto f = weighted_sum({1.0, 1.0});
  Configuration c{{1.0, -1.0}, {1, 0}};
  auto p = profile_at(space, f, c);
  CHECK(p.z == 0.0);
  CHECK(p.v_plus == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.v_minus == doctest::Approx(2.0).epsilon(1e-15));
  // drop-sum reduction: v = 1^2 + 1^2
  CHECK(p.v == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.m_resampled == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("constant functional has a null profile") {
  auto space = rademacher(3);
  auto f = constant_functional(5.0);
  Configuration c{{1, 1, 1}, {1, 1, 1}};
  auto p = profile_at(space, f, c);
  CHECK(p.z == 5.0);
  CHECK(p.v_plus == 0.0);
  CHECK(p.v_minus == 0.0);
  CHECK(p.v == 0.0);
  CHECK(p.m_resampled == 0.0);
  CHECK(p.m_reduced == 0.0);
}

TEST_CASE("exact norms") {
  auto space = rademacher(2);
  auto f = weighted_sum({1.0, 1.0});
  // Z in {-2, 0, 0, 2}: E[Z_+^2] = 1/4 * 4 = 1
  auto e = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_plus), 2.0);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.ci_halfwidth == 0.0);

  auto one = rademacher(1);
  auto id = weighted_sum({1.0});
  auto vp = exact_norm(one, id, QuantitySpec::of(QuantitySpec::Kind::v_plus), 1.0);
  CHECK(vp.value == doctest::Approx(1.0).epsilon(1e-12));

  // q = 1 of a nonnegative quantity is its mean
  auto space3 = bernoulli(3, 0.4);
  auto sum3 = weighted_sum({1, 1, 1});
  auto m1 = exact_norm(space3, sum3, QuantitySpec::of(QuantitySpec::Kind::z), 1.0);
  CHECK(m1.value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(exact_mean(space3, sum3) == doctest::Approx(1.2).epsilon(1e-12));

  CHECK_THROWS_AS(exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 0.5),
                  std::invalid_argument);
}

TEST_CASE("efron-stein equality for sums, inequality in general") {
  for (std::size_t n = 2; n <= 6; ++n) {
    auto g = efron_stein_gap(rademacher(n), weighted_sum(std::vector<double>(n, 1.0)));
    CHECK(g.variance == doctest::Approx(double(n)).epsilon(1e-12));
    CHECK(std::abs(g.es_rhs - g.variance) <= 1e-10);
  }
  auto g = efron_stein_gap(rademacher(2), max_functional());
  CHECK(g.es_rhs >= g.variance - 1e-10);
  CHECK(g.variant_rhs >= g.variance - 1e-10);

  auto c = efron_stein_gap(rademacher(2), constant_functional(3.0));
  CHECK(c.variance == doctest::Approx(0.0));
  CHECK(c.es_rhs == doctest::Approx(0.0));
  CHECK(c.variant_rhs == doctest::Approx(0.0));
}

TEST_CASE("exchange symmetry: E[V+] = E[V-] = es_rhs") {
  auto space = build_space({Marginal::finite_support({0, 1, 3}, {0.5, 0.25, 0.25}),
                            Marginal::rademacher(), Marginal::bernoulli(0.3)});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto f = table_functional(space, seed, false);
    auto evp = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::v_plus), 1.0).value;
    auto evm = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::v_minus), 1.0).value;
    CHECK(std::abs(evp - evm) <= 1e-10);
    auto g = efron_stein_gap(space, f);
    CHECK(std::abs(0.5 * (evp + evm) - g.es_rhs) <= 1e-10);
    CHECK(g.variance <= evp + evm + 1e-10);
    CHECK(g.variance <= g.es_rhs + 1e-10);
    CHECK(g.variance <= g.variant_rhs + 1e-10);
  }
}

TEST_CASE("drop_to_infimum keeps Z_i <= Z pointwise") {
  auto space = bernoulli(4, 0.35);
  for (std::uint64_t seed : {5u, 6u}) {
    auto f = table_functional(space, seed, true);
    for_each_outcome(space, [&](const Configuration& c, double) {
      auto p = profile_at(space, f, c);
      CHECK(p.red_min >= 0.0);
    });
  }
}

TEST_CASE("user reduction depending on its own coordinate is rejected") {
  auto space = rademacher(3);
  Functional bad;
  bad.eval = [](const Configuration& c) { return c.values[0] + c.values[1] + c.values[2]; };
  bad.reduction =
      ReductionRule::user([](std::size_t, const Configuration& c) { return c.values[0]; });
  CHECK_THROWS_AS(validate_reduction(space, bad), std::invalid_argument);
  auto good = weighted_sum({1, 1, 1});
  CHECK_NOTHROW(validate_reduction(space, good));
}

TEST_CASE("sampler marginals reject exact paths and support MC profiles") {
  auto space = build_space({Marginal::uniform(0.0, 1.0), Marginal::bernoulli(0.5)});
  Functional f;
  f.eval = [](const Configuration& c) { return c.values[0] + c.values[1]; };
  f.reduction = ReductionRule::baseline({0.0});
  Configuration c = sample_config(space, 3, 0);
  CHECK_THROWS_AS(profile_at(space, f, c), EnumerationUnavailable);
  CHECK_THROWS_AS(exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 2.0),
                  EnumerationUnavailable);
  // drop_to_infimum cannot be resolved on a continuous coordinate
  Functional g = f;
  g.reduction = ReductionRule::drop_to_infimum();
  CHECK_THROWS_AS(profile_estimate(space, g, c, 3, 0, 32), EnumerationUnavailable);

  // hybrid profile: exact resummation on the finite coordinate, inner
  // sampling on the continuous one; V+ + V- estimates E[sum (Z - Z'_i)^2 | X]
  auto p = profile_estimate(space, f, c, 3, 0, 4096);
  const double u = c.values[0];
  // coordinate 0: E[(u - U')^2] = u^2 - u + 1/3; coordinate 1: b(1-b) terms
  const double expect0 = u * u - u + 1.0 / 3.0;
  CHECK(std::abs((p.v_plus + p.v_minus) -
                 (expect0 + 0.5 * (c.values[1] == 1.0 ? 1.0 : 1.0))) < 0.05);
}

TEST_CASE("mc_norm basics") {
  auto space = rademacher(4);
  auto f = weighted_sum({1, 1, 1, 1});
  CHECK_THROWS_AS(mc_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 2.0, 1, 50),
                  std::invalid_argument);

  auto c = mc_norm(space, constant_functional(4.0), QuantitySpec::of(QuantitySpec::Kind::z), 3.0,
                   1, 500);
  CHECK(c.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c.ci_halfwidth == 0.0);

  // determinism
  auto a = mc_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 2.0, 9, 400);
  auto b = mc_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 2.0, 9, 400);
  CHECK(a.value == b.value);
  CHECK(a.ci_halfwidth == b.ci_halfwidth);
}

TEST_CASE("mc_norm calibration against exact value") {
  auto space = rademacher(4);
  auto f = weighted_sum({1.0, 0.5, 2.0, 1.0});
  const double exact = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 2.0).value;
  int covered = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    auto e = mc_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), 2.0,
                     1000 + static_cast<std::uint64_t>(t), 1000);
    if (std::abs(e.value - exact) <= e.ci_halfwidth) ++covered;
  }
  CHECK(covered >= 990);
}

TEST_CASE("mc profile quantities agree with exact on finite spaces") {
  auto space = bernoulli(5, 0.4);
  auto f = weighted_sum({1, 2, 1, 0.5, 1});
  const double exact = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::v_plus), 1.0).value;
  auto e = mc_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::v_plus), 1.0, 3, 20000);
  CHECK(std::abs(e.value - exact) <= 3.0 * e.ci_halfwidth + 1e-9);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "momineq/product_space.hpp"

using namespace momineq;

TEST_CASE("build_space validation") {
  CHECK_THROWS_AS(build_space({}), std::invalid_argument);
  CHECK_THROWS_AS(Marginal::finite_support({1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Marginal::finite_support({0.0, 1.0}, {0.6, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Marginal::finite_support({0.0, 1.0}, {-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(Marginal::uniform(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Marginal::gaussian(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("enumeration counts and weights") {
  CHECK(rademacher(2).enumerable_size() == 4);
  CHECK(bernoulli(3, 0.5).enumerable_size() == 8);

  // bernoulli(2, 0.25): weights are products of (0.75, 0.25)
  std::vector<double> ws;
  for_each_outcome(bernoulli(2, 0.25),
                   [&](const Configuration&, double w) { ws.push_back(w); });
  REQUIRE(ws.size() == 4);
  CHECK(ws[0] == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(ws[1] == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(ws[2] == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(ws[3] == doctest::Approx(0.0625).epsilon(1e-15));

  double sum = 0.0;
  for (double w : ws) sum += w;
  CHECK(std::abs(sum - 1.0) <= 1e-10);
}

TEST_CASE("weight sum is 1 for an uneven space") {
  auto space = build_space({Marginal::finite_support({0, 1, 2}, {0.2, 0.5, 0.3}),
                            Marginal::bernoulli(0.1), Marginal::rademacher(),
                            Marginal::finite_support({-2, 0, 3, 7}, {0.1, 0.2, 0.3, 0.4})});
  auto s = enumerate_reduce(space, 1,
                            [](const Configuration&, double w, std::span<double> a) { a[0] += w; });
  CHECK(std::abs(s[0] - 1.0) <= 1e-10);
}

TEST_CASE("cap rejection names the size") {
  auto space = rademacher(30);
  CHECK_THROWS_AS(space.enumerable_size(), EnumerationUnavailable);
  auto sampler_space = build_space({Marginal::uniform(0, 1)});
  CHECK_THROWS_AS(sampler_space.enumerable_size(), EnumerationUnavailable);
}

TEST_CASE("enumeration cap env override") {
  CHECK(default_enumeration_cap() == (std::uint64_t(1) << 24));
  setenv("MOMINEQ_ENUM_CAP", "16", 1);
  CHECK(default_enumeration_cap() == 16);
  auto small = rademacher(5);  // 32 > 16
  CHECK_THROWS_AS(small.enumerable_size(), EnumerationUnavailable);
  unsetenv("MOMINEQ_ENUM_CAP");
  CHECK(rademacher(5).enumerable_size() == 32);
}

TEST_CASE("sampling is deterministic") {
  auto space = bernoulli(4, 0.3);
  auto a = sample_config(space, 42, 7);
  auto b = sample_config(space, 42, 7);
  CHECK(a.values == b.values);
  // counter-based draws: sample 10^6 needs no prior state
  auto c = sample_config(space, 42, 1000000);
  CHECK(c.values.size() == 4);
}

TEST_CASE("rademacher sample means are centered") {
  auto space = rademacher(4);
  const std::uint64_t n = 100000;
  std::vector<double> mean(4, 0.0);
  for (std::uint64_t j = 0; j < n; ++j) {
    auto c = sample_config(space, 7, j);
    for (int i = 0; i < 4; ++i) mean[i] += c.values[i];
  }
  for (int i = 0; i < 4; ++i) CHECK(std::abs(mean[i] / n) < 0.02);
}

TEST_CASE("bernoulli frequency matches p") {
  auto space = bernoulli(1, 0.2);
  const std::uint64_t n = 100000;
  double ones = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) ones += sample_config(space, 11, j).values[0];
  CHECK(std::abs(ones / n - 0.2) < 0.008);
}

TEST_CASE("sampled frequencies match enumeration weights (chi-square)") {
  auto space = build_space({Marginal::bernoulli(0.3), Marginal::bernoulli(0.5),
                            Marginal::finite_support({0, 1, 2}, {0.25, 0.5, 0.25})});
  const std::uint64_t total = space.enumerable_size();
  std::vector<double> expw;
  for_each_outcome(space, [&](const Configuration&, double w) { expw.push_back(w); });

  const std::uint64_t n = 200000;
  std::vector<double> counts(total, 0.0);
  for (std::uint64_t j = 0; j < n; ++j) {
    auto c = sample_config(space, 5, j);
    std::uint64_t flat = 0;
    for (std::size_t i = 0; i < space.n(); ++i)
      flat = flat * space.marginals[i].support.size() + c.indices[i];
    counts[flat] += 1.0;
  }
  double chi2 = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) {
    const double e = expw[k] * n;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // 11 dof; 40 sits far beyond the 0.999 quantile
  CHECK(chi2 < 40.0);
}

TEST_CASE("sampler marginals produce reasonable draws") {
  auto u = Marginal::uniform(2.0, 5.0);
  auto g = Marginal::gaussian(1.0, 2.0);
  double us = 0.0, gs = 0.0, gs2 = 0.0;
  const std::uint64_t n = 100000;
  for (std::uint64_t j = 0; j < n; ++j) {
    const double uv = u.sample(3, j, 0);
    CHECK(uv >= 2.0);
    CHECK(uv < 5.0);
    us += uv;
    const double gv = g.sample(3, j, 1);
    gs += gv;
    gs2 += gv * gv;
  }
  CHECK(std::abs(us / n - 3.5) < 0.02);
  CHECK(std::abs(gs / n - 1.0) < 0.04);
  CHECK(std::abs(gs2 / n - (4.0 + 1.0)) < 0.2);
}

TEST_CASE("blockwise reduce is invariant under thread count") {
  auto space = build_space({Marginal::finite_support({0.1, 0.7, 1.3}, {0.3, 0.3, 0.4}),
                            Marginal::rademacher(), Marginal::rademacher(),
                            Marginal::bernoulli(0.25), Marginal::bernoulli(0.75),
                            Marginal::finite_support({-1, 0, 2}, {0.4, 0.4, 0.2})});
  auto body = [](const Configuration& c, double w, std::span<double> a) {
    double s = 0.0;
    for (double v : c.values) s += std::sin(v) * v;
    a[0] += w * s;
    a[1] += w * s * s;
  };
  set_thread_count(1);
  auto r1 = enumerate_reduce(space, 2, body);
  set_thread_count(4);
  auto r4 = enumerate_reduce(space, 2, body);
  set_thread_count(7);
  auto r7 = enumerate_reduce(space, 2, body);
  set_thread_count(1);
  CHECK(r1[0] == r4[0]);
  CHECK(r1[1] == r4[1]);
  CHECK(r1[0] == r7[0]);
  CHECK(r1[1] == r7[1]);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "momineq/classical_apps.hpp"

using namespace momineq;
using testutil::weighted_sum;

namespace {

// class of linear functions f_t(x_i) = t_i x_i over the given space
FunctionClass linear_class(const ProductSpace& s, const std::vector<std::vector<double>>& vectors,
                           bool centered) {
  FunctionClass fc;
  fc.centered = centered;
  for (const auto& t : vectors) {
    std::vector<std::vector<double>> table(s.n());
    for (std::size_t i = 0; i < s.n(); ++i)
      for (double x : s.marginals[i].support) table[i].push_back(t[i] * x);
    fc.tables.push_back(std::move(table));
  }
  return fc;
}

FunctionClass random_class(const ProductSpace& s, std::size_t nf, std::uint64_t seed,
                           bool nonneg) {
  FunctionClass fc;
  fc.centered = false;
  for (std::size_t fi = 0; fi < nf; ++fi) {
    std::vector<std::vector<double>> table(s.n());
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t k = 0; k < s.marginals[i].support.size(); ++k) {
        const double u = rng::uniform01(rng::key(seed, fi, i, k));
        table[i].push_back(nonneg ? u : 2.0 * u - 1.0);
      }
    fc.tables.push_back(std::move(table));
  }
  return fc;
}

}  // namespace

TEST_CASE("khinchine bound values and scaling") {
  std::vector<double> a{1.0, 1.0};
  auto plus = khinchine_bound(a, 2, false);
  // sqrt(2Kq) ||a||_2 = sqrt(4K) sqrt(2)
  CHECK(plus.value ==
        doctest::Approx(std::sqrt(4.0 * constant("K").value) * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(plus.value == doctest::Approx(2.7349).epsilon(1e-4));
  auto b = khinchine_bound(a, 2, true);
  CHECK(b.value == doctest::Approx(std::sqrt(2.0) * plus.value).epsilon(1e-12));

  std::vector<double> a2{2.0, 2.0};
  CHECK(khinchine_bound(a2, 3, false).value ==
        doctest::Approx(2.0 * khinchine_bound(a, 3, false).value).epsilon(1e-12));
  CHECK_THROWS_AS(khinchine_bound(std::vector<double>{}, 2, false), std::invalid_argument);
  CHECK_THROWS_AS(khinchine_bound(a, 2.5, false), std::invalid_argument);

  // exact ||(Z)_+||_2 = 1 <= bound on the enumerated pair
  auto space = rademacher(2);
  auto f = weighted_sum({1.0, 1.0});
  const double lhs = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_plus), 2.0).value;
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lhs <= plus.value + 1e-8);
}

TEST_CASE("rosenthal formulas") {
  SumStats st;
  st.sigma = 1.0;
  st.norm_max_abs_q = 0.0;
  auto thm9 = rosenthal_bounds(RosenthalKind::centered_thm9, st, 2.0, 1.0);
  REQUIRE(thm9.size() == 1);
  CHECK(thm9[0].value ==
        doctest::Approx(std::sqrt(2.0 * constant("kappa").value * 3.0 * 2.0)).epsilon(1e-12));
  CHECK(thm9[0].value == doctest::Approx(3.905).epsilon(1e-3));

  SumStats st8;
  st8.sum_mean_sq = 4.0;
  st8.ez = 1.0;
  st8.norm_max_q = 1.0;
  auto thm8 = rosenthal_bounds(RosenthalKind::nonneg_thm8, st8, 4.0, 0.5);
  REQUIRE(thm8.size() == 3);
  CHECK(thm8[1].value == doctest::Approx(std::sqrt(constant("K").value * 16.0)).epsilon(1e-12));
  CHECK(thm8[1].value == doctest::Approx(3.868).epsilon(1e-3));

  CHECK_THROWS_AS(rosenthal_bounds(RosenthalKind::nonneg_thm8, st8, 4.0, 1.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(rosenthal_bounds(RosenthalKind::centered_thm9, st, 2.5, 0.5),
                  std::invalid_argument);
}

TEST_CASE("ep_stats on singleton and multi-function classes") {
  auto space = rademacher(3);
  const std::vector<double> qs{2.0, 3.0};

  // singleton class: Sigma^2 = sigma^2
  auto single = linear_class(space, {{1.0, 0.5, 0.25}}, true);
  auto st = ep_stats_exact(space, single, qs);
  CHECK(st.Sigma2 == doctest::Approx(st.sigma2).epsilon(1e-12));

  // two-function class: sigma^2 <= Sigma^2
  auto two = linear_class(space, {{1.0, 0.0, 1.0}, {0.0, 1.0, 0.5}}, true);
  auto st2 = ep_stats_exact(space, two, qs);
  CHECK(st2.sigma2 <= st2.Sigma2 + 1e-12);

  // nonnegative singleton f = 1: EZ = n, M = 1
  FunctionClass ones;
  ones.centered = false;
  ones.tables = {std::vector<std::vector<double>>(3, std::vector<double>{1.0, 1.0})};
  auto sto = ep_stats_exact(space, ones, qs);
  CHECK(sto.ez == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sto.m_norms.at(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sto.m_max == 1.0);
}

TEST_CASE("ep_stats exact vs mc") {
  auto space = rademacher(4);
  auto fc = random_class(space, 3, 77, false);
  fc.centered = false;
  const std::vector<double> qs{2.0};
  auto ex = ep_stats_exact(space, fc, qs);
  auto mc = ep_stats_mc(space, fc, qs, 4, 40000);
  CHECK(std::abs(ex.ez - mc.ez) < 0.02);
  CHECK(std::abs(ex.Sigma2 - mc.Sigma2) < 0.05);
  CHECK(ex.sigma2 == mc.sigma2);  // deterministic component
}

TEST_CASE("thm10 bounds dominate the enumerated supremum") {
  auto space = rademacher(4);
  std::vector<std::vector<double>> vectors{{1, 0.5, -0.25, 0}, {0, 1, 1, -1}, {0.5, 0.5, 0.5, 0.5}};
  double sup_l2 = 0.0, sup_entry = 0.0;
  for (const auto& t : vectors) {
    double l2 = 0.0;
    for (double v : t) {
      l2 += v * v;
      sup_entry = std::max(sup_entry, std::abs(v));
    }
    sup_l2 = std::max(sup_l2, std::sqrt(l2));
  }
  Functional f;
  auto vecs = vectors;
  f.eval = [vecs](const Configuration& c) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : vecs) {
      double s = 0.0;
      for (std::size_t i = 0; i < c.values.size(); ++i) s += t[i] * c.values[i];
      best = std::max(best, s);
    }
    return best;
  };
  f.reduction = ReductionRule::drop_to_infimum();

  for (double q : {2.0, 3.0, 4.0}) {
    const double plus =
        exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_plus), q).value;
    const double minus =
        exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_minus), q).value;
    CHECK(plus <= sup_linear_plus_bound(q, sup_l2).value + 1e-8);
    CHECK(minus <= sup_linear_minus_bound(q, sup_l2, sup_entry).value + 1e-8);
  }
}

TEST_CASE("thm11 and thm12 dominate enumerated classes") {
  auto space = rademacher(4);
  const std::vector<double> qs{2.0, 3.0, 4.0};

  // nonnegative class for thm11
  auto nn = random_class(space, 3, 5, true);
  auto stn = ep_stats_exact(space, nn, qs);
  auto fn = ep_functional(nn);
  for (double q : qs) {
    const double lhs = exact_norm(space, fn, QuantitySpec::of(QuantitySpec::Kind::z), q).value;
    CHECK(lhs <= nonneg_class_norm_bound(q, stn.ez, stn.m_norms.at(q), 1.0).value + 1e-8);
  }

  // centered two-function class for thm12
  auto fc = linear_class(space, {{1, -0.5, 0.25, 0.75}, {-0.25, 1, -1, 0.5}}, true);
  auto st = ep_stats_exact(space, fc, qs);
  auto f = ep_functional(fc);
  for (double q : qs) {
    const double plus =
        exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_plus), q).value;
    const double norm = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), q).value;
    CHECK(plus <= ep_centered_plus_bound(q, st).value + 1e-8);
    CHECK(norm <= ep_centered_norm_bound(q, st).value + 1e-8);
  }

  // thm12_second closed-form spot value: sigma = EZ = 1, M norms -> 0
  EPStats limit;
  limit.sigma2 = 1.0;
  limit.ez = 1.0;
  limit.m_norms[2.0] = 0.0;
  limit.m_norms[3.0] = 0.0;
  CHECK(ep_centered_norm_bound(3.0, limit).value ==
        doctest::Approx(2.0 + 2.0 * std::sqrt(2.0 * constant("kappa").value * 3.0))
            .epsilon(1e-12));
}

TEST_CASE("lemma7") {
  auto space = rademacher(4);
  auto single = linear_class(space, {{1, 1, 1, 1}}, true);
  auto st = ep_stats_exact(space, single, std::vector<double>{2.0});
  auto [lhs, rhs] = lemma7_check(st, st.m_norms.at(2.0) * st.m_norms.at(2.0));
  CHECK(lhs == doctest::Approx(st.sigma2).epsilon(1e-12));
  CHECK(lhs <= rhs + 1e-8);

  for (std::uint64_t seed : {21u, 22u, 23u}) {
    auto fc = random_class(space, 3, seed, false);
    fc.centered = false;
    auto s2 = ep_stats_exact(space, fc, std::vector<double>{2.0});
    auto [l, r] = lemma7_check(s2, s2.m_norms.at(2.0) * s2.m_norms.at(2.0));
    CHECK(l <= r + 1e-8);
  }

  EPStats zero;  // f == 0 class
  auto [zl, zr] = lemma7_check(zero, 0.0);
  CHECK(zl == 0.0);
  CHECK(zr == 0.0);
}

TEST_CASE("lemma8") {
  auto space = build_space({Marginal::finite_support({0.0, 4.0}, {0.9, 0.1}),
                            Marginal::finite_support({0.0, 3.0}, {0.8, 0.2}),
                            Marginal::bernoulli(0.5)});
  auto fc = random_class(space, 2, 9, false);
  // scale one table entry up so the indicator can fire
  fc.tables[0][0][1] = 6.0;
  auto [lhs, rhs] = lemma8_check(space, fc, 16.0);
  CHECK(lhs <= rhs + 1e-8);

  // bounded class: envelope never exceeds t0, so the lhs vanishes
  auto small = random_class(space, 2, 10, true);
  auto [l2, r2] = lemma8_check(space, small, 1e6);
  CHECK(l2 == 0.0);
  CHECK(r2 > 0.0);

  CHECK_THROWS_AS(lemma8_check(space, fc, 4.0), std::invalid_argument);

  // lambda -> infinity drives the rhs to E[M^2]
  auto em2 = enumerate_reduce(space, 1, [&](const Configuration& c, double w, std::span<double> a) {
    const double m = fc.envelope(c);
    a[0] += w * m * m;
  })[0];
  auto [l3, r3] = lemma8_check(space, fc, 1e12);
  CHECK(r3 == doctest::Approx(em2).epsilon(1e-5));
  CHECK(l3 >= 0.0);
}

TEST_CASE("conditional rademacher values") {
  auto one = bernoulli(1, 0.5);
  FunctionClass id1;
  id1.tables = {{std::vector<double>{0.0, 1.0}}};
  Configuration c1{{1.0}, {1}};
  CHECK(conditional_rademacher_value(one, id1, c1) == doctest::Approx(1.0).epsilon(1e-12));

  auto two = bernoulli(2, 0.5);
  FunctionClass id2;
  id2.tables = {{std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}}};
  Configuration c2{{1.0, 1.0}, {1, 1}};
  // E|eps_1 + eps_2| = 1
  CHECK(conditional_rademacher_value(two, id2, c2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditional rademacher self-bounding structure") {
  auto space = build_space({Marginal::finite_support({0.0, 0.5, 1.0}, {0.5, 0.25, 0.25}),
                            Marginal::bernoulli(0.4), Marginal::bernoulli(0.6)});
  auto fc = random_class(space, 2, 31, false);
  auto f = conditional_rademacher_functional(space, fc);
  for_each_outcome(space, [&](const Configuration& c, double) {
    const auto p = profile_at(space, f, c);
    CHECK(p.red_min >= -1e-12);           // Z_i <= Z
    CHECK(p.red_sum <= p.z + 1e-12);      // sum_i (Z - Z_i) <= Z
    const double m = fc.envelope(c);
    CHECK(p.m_reduced <= m + 1e-12);      // Z - Z_i <= M
  });

  // thm13 bounds dominate the enumerated norms
  const double ez = exact_mean(space, f);
  Functional menv;
  menv.eval = [fc](const Configuration& c) { return fc.envelope(c); };
  menv.reduction = ReductionRule::drop_to_infimum();
  for (double q : {2.0, 3.0}) {
    const double nm = exact_norm(space, menv, QuantitySpec::of(QuantitySpec::Kind::z), q).value;
    auto [up, lo] = thm13_bounds(ez, nm, q);
    const double plus =
        exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_plus), q).value;
    const double minus =
        exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z_minus), q).value;
    CHECK(plus <= up.value + 1e-8);
    CHECK(minus <= lo.value + 1e-8);
  }
}

TEST_CASE("conditional rademacher inner MC agrees with exact enumeration") {
  auto space = bernoulli(4, 0.5);
  auto fc = random_class(space, 2, 61, false);
  Configuration c{{1, 0, 1, 1}, {1, 0, 1, 1}};
  const double exact = conditional_rademacher_value(space, fc, c);
  const double mc = conditional_rademacher_value_mc(space, fc, c, 5, 40000);
  CHECK(std::abs(mc - exact) < 0.02 * (1.0 + exact));
  // deterministic for a fixed seed
  CHECK(conditional_rademacher_value_mc(space, fc, c, 5, 40000) == mc);
  CHECK_THROWS_AS(conditional_rademacher_value_mc(space, fc, c, 5, 0), std::invalid_argument);
}

TEST_CASE("homogeneity of the sum and EP bounds") {
  std::vector<double> a{0.5, 1.5, 2.0};
  for (double c : {2.0, 5.0}) {
    std::vector<double> ca;
    for (double v : a) ca.push_back(c * v);
    CHECK(khinchine_bound(ca, 4, true).value ==
          doctest::Approx(c * khinchine_bound(a, 4, true).value).epsilon(1e-12));
    CHECK(sup_linear_plus_bound(3, c * 1.7).value ==
          doctest::Approx(c * sup_linear_plus_bound(3, 1.7).value).epsilon(1e-12));
  }
}

TEST_CASE("marcinkiewicz companion on centered sums") {
  auto space = build_space({Marginal::rademacher(), Marginal::rademacher(),
                            Marginal::finite_support({-1.0, 0.5}, {1.0 / 3.0, 2.0 / 3.0}),
                            Marginal::rademacher()});
  std::vector<double> a{1.0, 0.7, 1.2, 0.4};
  auto f = weighted_sum(a);
  auto sumsq = QuantitySpec{QuantitySpec::Kind::user,
                            [a](const Configuration& c, const IncrementProfile&, double) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < c.values.size(); ++i)
                                s += a[i] * a[i] * c.values[i] * c.values[i];
                              return s;
                            }};
  for (double q : {2.0, 4.0}) {
    const double nss = exact_norm(space, f, sumsq, q / 2.0).value;
    const double lhs = exact_norm(space, f, QuantitySpec::of(QuantitySpec::Kind::z), q).value;
    CHECK(lhs <= marcinkiewicz_bound(q, nss) + 1e-8);
  }
}

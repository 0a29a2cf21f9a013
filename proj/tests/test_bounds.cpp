#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "momineq/bounds.hpp"
#include "momineq/rng.hpp"

using namespace momineq;

namespace {
BoundInputs with_q(double q) {
  BoundInputs in;
  in.q = q;
  return in;
}
}  // namespace

TEST_CASE("thm1: sqrt(Kqc)") {
  auto in = with_q(2);
  in.c = 2.0;
  auto r = moment_bound("thm1_plus", in);
  CHECK(r.value == doctest::Approx(std::sqrt(4.0 * constant("K").value)).epsilon(1e-15));
  CHECK(r.value == doctest::Approx(1.93386).epsilon(1e-4));
  CHECK(r.side == BoundResult::Side::upper_plus);

  in.expectation_z = 0.0;
  auto n = moment_bound("thm1_norm", in);
  CHECK(n.value == doctest::Approx(std::sqrt(2.0) * r.value).epsilon(1e-12));

  CHECK_THROWS_AS(moment_bound("thm1_plus", with_q(2.5)), std::invalid_argument);
  CHECK_THROWS_AS(moment_bound("thm1_plus", with_q(2)), std::invalid_argument);  // missing c
}

TEST_CASE("thm2: relaxed and tight") {
  auto in = with_q(2);
  in.norm_vplus = 1.0;
  auto relaxed = moment_bound("thm2_plus", in);
  CHECK(relaxed.value == doctest::Approx(2.0).epsilon(1e-12));  // kappa_2 = 1
  auto tight = moment_bound("thm2_plus_tight", in);
  CHECK(tight.value == doctest::Approx(relaxed.value * std::sqrt(0.5)).epsilon(1e-12));

  for (double q : {2.0, 2.5, 3.0, 6.0, 17.0}) {
    auto i2 = with_q(q);
    i2.norm_vplus = 0.7;
    i2.norm_vminus = 0.7;
    CHECK(moment_bound("thm2_plus_tight", i2).value <=
          moment_bound("thm2_plus", i2).value + 1e-15);
    CHECK(moment_bound("thm2_minus_tight", i2).value <=
          moment_bound("thm2_minus", i2).value + 1e-15);
  }
}

TEST_CASE("thm3 and thm4") {
  auto in = with_q(4);
  in.norm_v = 2.0;
  CHECK(moment_bound("thm3", in).value ==
        doctest::Approx(std::sqrt(kappa_q(4.0) * 4.0 * 2.0)).epsilon(1e-12));

  auto i4 = with_q(3);
  i4.norm_vplus = 1.0;
  i4.norm_m_q = 0.2;
  auto b1 = moment_bound("thm4_vplus", i4);
  CHECK(b1.value ==
        doctest::Approx(std::sqrt(constant("C1").value * 3.0 *
                                  std::max(1.0, 3.0 * 0.04)))
            .epsilon(1e-12));
  i4.norm_v = 1.0;
  auto b2 = moment_bound("thm4_v", i4);
  CHECK(b2.value < b1.value);  // C2 < C1
}

TEST_CASE("cor1 family") {
  auto in = with_q(3);
  in.expectation_z = 1.0;
  in.a_self = 1.0;
  CHECK(moment_bound("cor1_mean", in).value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(moment_bound("cor1_mean", with_q(2.5)), std::invalid_argument);

  auto p = moment_bound("cor1_plus", in);
  const double kappa = constant("kappa").value;
  CHECK(p.value ==
        doctest::Approx(std::sqrt(kappa) * (std::sqrt(3.0) + 1.5)).epsilon(1e-12));

  auto m = moment_bound("cor1_minus", in);
  CHECK(m.value ==
        doctest::Approx(std::sqrt(constant("cor1_C").value * 3.0)).epsilon(1e-12));
}

TEST_CASE("cor2 and cor3") {
  auto in = with_q(2);
  in.c = 1.5;
  CHECK(moment_bound("cor2", in).value ==
        doctest::Approx(std::sqrt(constant("K").value * 2.0 * 1.5)).epsilon(1e-12));

  auto i3 = with_q(2);
  i3.norm_w_q = 1.0;
  i3.expectation_z = 2.0;
  i3.theta = 1.0;
  const double kappa = constant("kappa").value;
  CHECK(moment_bound("cor3_mean", i3).value ==
        doctest::Approx(4.0 + kappa * 2.0).epsilon(1e-12));
  CHECK(moment_bound("cor3_plus", i3).value ==
        doctest::Approx(std::sqrt(8.0 * kappa) + 2.0 * kappa).epsilon(1e-12));

  i3.norm_m_q = 1.0;
  auto cm = moment_bound("cor3_minus", i3);
  CHECK(cm.value == doctest::Approx(std::sqrt(constant("C2").value * 2.0 *
                                              std::max(1.0 * (4.0 + 4.0), 2.0)))
                        .epsilon(1e-12));

  i3.theta = 1.5;
  CHECK_THROWS_AS(moment_bound("cor3_mean", i3), std::invalid_argument);
  CHECK_THROWS_AS(moment_bound("nonsense", with_q(2)), std::invalid_argument);
}

TEST_CASE("bounds are monotone in their norm inputs") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const double q = 2.0 + 6.0 * rng::uniform01(rng::key(1, s, 0, 0));
    const double base = 0.1 + rng::uniform01(rng::key(1, s, 1, 0));
    const double bump = 0.1 + rng::uniform01(rng::key(1, s, 2, 0));
    BoundInputs lo, hi;
    lo.q = hi.q = q;
    lo.norm_vplus = base;
    hi.norm_vplus = base + bump;
    CHECK(moment_bound("thm2_plus", lo).value <= moment_bound("thm2_plus", hi).value + 1e-15);
    lo.norm_v = base;
    hi.norm_v = base + bump;
    CHECK(moment_bound("thm3", lo).value <= moment_bound("thm3", hi).value + 1e-15);
    lo.norm_m_q = 0.3;
    hi.norm_m_q = 0.3 + bump;
    CHECK(moment_bound("thm4_v", lo).value <= moment_bound("thm4_v", hi).value + 1e-15);
  }
}

TEST_CASE("tail_from_moments") {
  CHECK(tail_from_moments(2.0, {{2.0, 1.0}}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(tail_from_moments(0.5, {{2.0, 1.0}}) == 1.0);
  // both entries evaluated, best one wins
  const double expected = std::pow(1.2 / 3.0, 4.0);
  CHECK(tail_from_moments(3.0, {{2.0, 1.0}, {4.0, 1.2}}) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected < std::pow(1.0 / 3.0, 2.0));
  // adding entries never increases the bound
  CHECK(tail_from_moments(3.0, {{2.0, 1.0}, {4.0, 1.2}}) <=
        tail_from_moments(3.0, {{2.0, 1.0}}) + 1e-15);
  CHECK_THROWS_AS(tail_from_moments(-1.0, {{2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(tail_from_moments(1.0, {}), std::invalid_argument);
}

TEST_CASE("chaos_tail") {
  const double kappa = constant("kappa").value;
  const double v = chaos_tail(20.0, {1.0}, 1);
  CHECK(v == doctest::Approx(2.0 * std::exp(-std::log(2.0) / (4.0 * kappa) * 100.0))
                 .epsilon(1e-12));
  CHECK(v == doctest::Approx(2.4e-6).epsilon(0.02));
  CHECK(chaos_tail(2.0, {1.0}, 1) == 1.0);  // capped
  // monotone decreasing to zero in t
  double prev = 1.0;
  for (double t = 1.0; t < 1000.0; t += 20.0) {
    const double cur = chaos_tail(t, {1.0, 0.5}, 2);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK(prev < 1e-12);
  CHECK_THROWS_AS(chaos_tail(1.0, {0.0}, 1), std::invalid_argument);
}

TEST_CASE("boolean_tail") {
  // d = 1 reduces to a two-regime bound; structural checks only
  const double b = boolean_tail(5.0, 2.0, {1.0}, 1);
  CHECK(b > 0.0);
  CHECK(b <= 1.0);

  // triangle-count magnitudes (n = 25, p = 0.2): at t = E[Z] the bound is
  // strictly inside (0, 1)
  const double tri = boolean_tail(18.4, 18.4, {1.0, 1.0, 4.2}, 3);
  CHECK(tri > 0.0);
  CHECK(tri < 1.0);
  // monotone decreasing in each EM entry
  CHECK(boolean_tail(5.0, 2.0, {1.0}, 1) <= boolean_tail(5.0, 2.0, {2.0}, 1) + 1e-15);
  const double t2a = boolean_tail(6.0, 3.0, {1.0, 0.5}, 2);
  const double t2b = boolean_tail(6.0, 3.0, {1.5, 0.5}, 2);
  const double t2c = boolean_tail(6.0, 3.0, {1.0, 0.9}, 2);
  CHECK(t2a <= t2b + 1e-15);
  CHECK(t2a <= t2c + 1e-15);
  CHECK_THROWS_AS(boolean_tail(1.0, 1.0, {0.5, 0.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(boolean_tail(0.0, 1.0, {0.5}, 1), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "momineq/constants.hpp"

using namespace momineq;

TEST_CASE("closed-form constants") {
  const auto& kappa = constant("kappa");
  // sqrt(e) / (2 (sqrt(e) - 1)), evaluated independently
  const double se = std::sqrt(std::exp(1.0));
  CHECK(kappa.value == doctest::Approx(se / (2.0 * (se - 1.0))).epsilon(1e-15));
  CHECK(kappa.value == doctest::Approx(1.2707471).epsilon(1e-7));
  CHECK(kappa.value < 1.271);
  CHECK(kappa.value > 1.2707);

  const auto& K = constant("K");
  CHECK(K.value == doctest::Approx(1.0 / (std::exp(1.0) - se)).epsilon(1e-15));
  CHECK(K.value == doctest::Approx(0.9349634).epsilon(1e-7));
  CHECK(K.value < 0.935);
  CHECK(K.value > 0.9349);
}

TEST_CASE("bisection roots and enclosures") {
  for (const char* name : {"C1", "C2", "cor1_C"}) {
    const auto& c = constant(name);
    CHECK(c.method == ConstantValue::Method::bisection);
    CHECK(c.enclosure_low <= c.value);
    CHECK(c.value <= c.enclosure_high);
    CHECK(c.enclosure_high - c.enclosure_low <= 1e-10);
    CHECK(std::abs(constant_residual(name, c.value)) <= 1e-9);
  }
  CHECK(constant("C1").value > 4.10);
  CHECK(constant("C1").value < 4.16);
  CHECK(constant("C2").value > 2.41);
  CHECK(constant("C2").value < 2.42);
  // the printed text of the source bound says C < 1.131; the root of the
  // printed equation sits slightly above, so only the wide bracket is pinned
  CHECK(constant("cor1_C").value > 1.12);
  CHECK(constant("cor1_C").value < 1.14);
}

TEST_CASE("constant rejects unknown names") {
  CHECK_THROWS_AS(constant("C3"), std::invalid_argument);
  CHECK_THROWS_AS(constant(""), std::invalid_argument);
}

TEST_CASE("kappa_q values") {
  CHECK(kappa_q(1.0) == 1.0);
  CHECK(kappa_q(2.0) == 1.0);
  CHECK(kappa_q(4.0) == doctest::Approx(8.0 / 7.0).epsilon(1e-15));
  CHECK(kappa_q(4.0) == doctest::Approx(1.1428571).epsilon(1e-7));
  CHECK_THROWS_AS(kappa_q(0.5), std::invalid_argument);
}

TEST_CASE("kappa_q is nondecreasing and bounded by kappa") {
  const double kappa = constant("kappa").value;
  double prev = 0.0;
  for (double q = 1.0; q <= 10000.0; q += 0.5) {
    const double v = kappa_q(q);
    CHECK(v >= prev - 1e-15);
    CHECK(v < kappa);
    prev = v;
  }
}

TEST_CASE("lemma6 sequence") {
  // direct evaluation: (3/4)^2 (1 + (e - sqrt(e)) (2/3))
  const double x4 = 0.5625 * (1.0 + (std::exp(1.0) - std::sqrt(std::exp(1.0))) * (2.0 / 3.0));
  CHECK(lemma6_x(4) == doctest::Approx(x4).epsilon(1e-15));
  CHECK(lemma6_x(4) == doctest::Approx(0.963585).epsilon(1e-6));
  CHECK_THROWS_AS(lemma6_x(3), std::invalid_argument);
  for (std::int64_t q = 4; q <= 10000; ++q) CHECK(lemma6_x(q) <= 1.0);
  const double far = lemma6_x(1000000);
  CHECK(far > 0.999);
  CHECK(far < 1.0);
}

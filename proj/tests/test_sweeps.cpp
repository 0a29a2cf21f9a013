#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// Randomized dominance sweeps: every asserted display must hold on arbitrary
// hypothesis-satisfying scenarios, not just the curated ones. Functionals,
// tensors and spaces are drawn from seeded streams so failures reproduce.

#include <string>

#include "momineq/verify.hpp"

using namespace momineq;

namespace {

std::string space_json(const ProductSpace& space) {
  std::string sj = R"({"marginals":[)";
  for (std::size_t i = 0; i < space.n(); ++i) {
    if (i) sj += ",";
    sj += R"({"support":[)";
    for (std::size_t k = 0; k < space.marginals[i].support.size(); ++k)
      sj += (k ? "," : "") + format_g17(space.marginals[i].support[k]);
    sj += R"(],"probs":[)";
    for (std::size_t k = 0; k < space.marginals[i].probs.size(); ++k)
      sj += (k ? "," : "") + format_g17(space.marginals[i].probs[k]);
    sj += "]}";
  }
  return sj + "]}";
}

void expect_no_fail(const Report& rep) {
  for (const auto& r : rep.rows) {
    CAPTURE(r.check_id);
    CHECK(r.status != "fail");
    CHECK(r.status != "rejected");
    CHECK(r.status != "resource");
  }
}

}  // namespace

TEST_CASE("random nonnegative functionals satisfy every reduction-based display") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ProductSpace space = (seed % 3 == 0) ? bernoulli(4, 0.3)
                       : (seed % 3 == 1) ? rademacher(4)
                       : build_space({Marginal::finite_support({0, 1, 2}, {0.2, 0.5, 0.3}),
                                      Marginal::bernoulli(0.6), Marginal::rademacher(),
                                      Marginal::finite_support({0, 0.5, 1}, {0.3, 0.3, 0.4})});
    const std::uint64_t total = space.enumerable_size();
    std::string vals = "[";
    for (std::uint64_t k = 0; k < total; ++k) {
      if (k) vals += ",";
      vals += format_g17(3.0 * rng::uniform01(rng::key(7777, seed, k, 0)));
    }
    vals += "]";
    const std::string text = R"({"name":"sweep_core","space":)" + space_json(space) +
                             R"(,"functional":{"id":"user_table","values":)" + vals +
                             R"(},"reduction":{"kind":"drop_to_infimum"},"checks":[
      {"theorem":"cor3_minus","q":[2,2.5,3,4,8],"w_rule":"vz_ratio"},
      {"theorem":"cor3_plus","q":[2,2.5,3,4,8],"w_rule":"vz_ratio"},
      {"theorem":"cor3_mean","q":[2,3,4],"w_rule":"vz_ratio","theta":0.7},
      {"theorem":"thm3","q":[2,2.5,3,4,8]},
      {"theorem":"thm4_v","q":[2,2.5,3,4,8]},
      {"theorem":"thm4_vplus","q":[2,2.5,3,4,8]},
      {"theorem":"thm2_plus","q":[2,2.5,3,4,8]},
      {"theorem":"thm2_minus","q":[2,2.5,3,4,8]},
      {"theorem":"thm1_plus","q":[2,3,4,8]},
      {"theorem":"thm1_norm","q":[2,3,4,8]}]})";
    expect_no_fail(execute(parse_scenario(text)));
  }
}

TEST_CASE("random d=2 chaos satisfies thm14, cor4, cor5 and the W chain") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 4 + seed % 2;
    const int ntens = seed % 4 == 3 ? 2 : 1;
    std::string tensors = "[";
    for (int t = 0; t < ntens; ++t) {
      if (t) tensors += ",";
      tensors += "[";
      bool first = true;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          if (!first) tensors += ",";
          first = false;
          double v = rng::uniform01(rng::key(8888, seed, i * 8 + j, t));
          if (seed % 2) v = 2.0 * v - 1.0;
          tensors += R"({"set":[)" + std::to_string(i) + "," + std::to_string(j) +
                     R"(],"coeff":)" + format_g17(v) + "}";
        }
      tensors += "]";
    }
    tensors += "]";
    const std::string text = R"({"name":"sweep_chaos","space":{"kind":"rademacher","n":)" +
                             std::to_string(n) +
                             R"(},"functional":{"id":"chaos","d":2,"tensors":)" + tensors +
                             R"(},"checks":[
      {"theorem":"thm14","q":[2,2.5,3,4,6,8]},
      {"theorem":"thm14_relaxed","q":[2,2.5,3,4,6,8]},
      {"theorem":"cor5","q":[2,2.5,3,4,6,8]},
      {"theorem":"cor4_tail"},
      {"theorem":"cor5_chain"}]})";
    auto rep = execute(parse_scenario(text));
    expect_no_fail(rep);
    // d = 2 values are certified, so nothing may hide behind not_asserted
    for (const auto& r : rep.rows) {
      CAPTURE(r.check_id);
      CHECK(r.status == "pass");
    }
  }
}

TEST_CASE("random boolean polynomials satisfy thm15 and its tail") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t d = seed % 4 == 3 ? 3 : 2;
    const std::size_t n = d == 3 ? 5 : 4 + seed % 3;
    const double p = 0.2 + 0.15 * (seed % 5);
    std::string tensors = "[[";
    bool first = true;
    std::vector<std::uint32_t> idx(d);
    for (std::size_t j = 0; j < d; ++j) idx[j] = static_cast<std::uint32_t>(j);
    while (true) {
      if (!first) tensors += ",";
      first = false;
      tensors += R"({"set":[)";
      for (std::size_t j = 0; j < d; ++j) tensors += (j ? "," : "") + std::to_string(idx[j]);
      tensors += R"(],"coeff":)" +
                 format_g17(rng::uniform01(rng::key(9999, seed, idx[0] * 64 + idx[d - 1], 0))) +
                 "}";
      std::size_t pos = d;
      while (pos > 0) {
        --pos;
        if (idx[pos] != pos + n - d) break;
      }
      if (idx[pos] == pos + n - d) break;
      ++idx[pos];
      for (std::size_t j = pos + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
    tensors += "]]";
    const std::string text = R"({"name":"sweep_bool","space":{"kind":"bernoulli","n":)" +
                             std::to_string(n) + R"(,"p":)" + format_g17(p) +
                             R"(},"functional":{"id":"boolean","d":)" + std::to_string(d) +
                             R"(,"tensors":)" + tensors + R"(},"checks":[
      {"theorem":"thm15","q":[2,2.5,3,4,8]},
      {"theorem":"thm15_tail"},
      {"theorem":"thm3","q":[2,3,4]},
      {"theorem":"cor3_plus","q":[2,3,4],"w_rule":"vz_ratio"},
      {"theorem":"cor3_minus","q":[2,3,4],"w_rule":"vz_ratio"}]})";
    expect_no_fail(execute(parse_scenario(text)));
  }
}

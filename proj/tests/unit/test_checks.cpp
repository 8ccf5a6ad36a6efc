#include "hpimc/checks.hpp"

#include "doctest.h"

using namespace hpimc;

TEST_CASE("log-log slope") {
  CHECK(log_log_slope({1, 2, 4, 8}, {3, 24, 192, 1536}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(log_log_slope({1}, {1}), std::invalid_argument);
}

TEST_CASE("random one-sparse generator") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto m = random_one_sparse(32, rng);
    CHECK(is_one_sparse(m.to_dense()));
  }
}

TEST_CASE("suites") {
  CHECK(check_suites().size() == 5);
  CHECK_THROWS_AS(run_check("nothing"), std::invalid_argument);
  const auto decompose = check_decompose({4, 8, 16});
  CHECK(decompose.passed());
  const auto onesparse = check_onesparse_exp(10, 16, 3);
  CHECK(onesparse.passed());
  const auto bound = check_error_bound(20, 5);
  CHECK(bound.passed());
  const auto mc = check_mc_convergence({2000, 20000});
  CHECK(mc.items.size() == 4);
}

TEST_CASE("JSON report") {
  CheckReport r{"demo", {}};
  r.add("alpha", true, 1.5, 2.0);
  r.add("beta", false, 3.0, 2.0, "too big");
  CHECK_FALSE(r.passed());
  const std::string json = to_json(r);
  CHECK(json.find("\"suite\": \"demo\"") != std::string::npos);
  CHECK(json.find("\"passed\": false") != std::string::npos);
  CHECK(json.find("\"detail\": \"too big\"") != std::string::npos);
}

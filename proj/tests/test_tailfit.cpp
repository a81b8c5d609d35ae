#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "creditnet/random.hpp"
#include "creditnet/tail_fit.hpp"

using namespace creditnet;
using Catch::Approx;

TEST_CASE("hill fit closed-form example {1, e, e^2} at cutoff 1") {
  std::vector<double> v{1.0, std::exp(1.0), std::exp(2.0)};
  auto fit = hill_fit(v, 1.0);
  CHECK(fit.mu_hat == Approx(1.0).margin(1e-12));
  CHECK(fit.tail_count == 3);
  CHECK(fit.std_error == Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
  CHECK(fit.cutoff == 1.0);
}

TEST_CASE("hill fit error paths") {
  SECTION("degenerate: everything sits at the cutoff") {
    std::vector<double> v{2, 2, 2, 2};
    CHECK_THROWS_AS(hill_fit(v, 2.0), InvalidArgument);
  }
  SECTION("fewer than 2 tail samples") {
    std::vector<double> v{1, 2, 30};
    CHECK_THROWS_AS(hill_fit(v, 10.0), InvalidArgument);
  }
  SECTION("nonpositive sample value") {
    std::vector<double> v{1, -2, 3};
    CHECK_THROWS_AS(hill_fit(v, 1.0), InvalidArgument);
    std::vector<double> z{0, 1, 3};
    CHECK_THROWS_AS(hill_fit(z, 1.0), InvalidArgument);
  }
  SECTION("bad cutoff") {
    std::vector<double> v{1, 2, 3};
    CHECK_THROWS_AS(hill_fit(v, 0.0), InvalidArgument);
  }
}

TEST_CASE("hill fit is scale invariant") {
  Rng rng(271828);
  std::vector<double> v;
  for (int i = 0; i < 500; ++i) v.push_back(rng.pareto(1.0, 1.7));
  auto base = hill_fit(v, 2.0);
  for (double c : {0.01, 3.0, 1e6}) {
    std::vector<double> scaled;
    for (double x : v) scaled.push_back(c * x);
    auto fit = hill_fit(scaled, c * 2.0);
    CHECK(fit.mu_hat == Approx(base.mu_hat).epsilon(1e-12));
    CHECK(fit.tail_count == base.tail_count);
  }
}

TEST_CASE("hill fit recovers a synthetic Pareto exponent") {
  Rng rng(31415);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) v.push_back(rng.pareto(1.0, 2.6));
  auto fit = hill_fit(v, select_cutoff(v, FixedQuantile{0.5}));
  CHECK(std::abs(fit.mu_hat - 2.6) < 3.0 * fit.std_error);
  CHECK(fit.std_error == Approx(fit.mu_hat / std::sqrt(fit.tail_count)));
}

TEST_CASE("std_error shrinks as the tail grows") {
  Rng rng(999);
  std::vector<double> small, large;
  for (int i = 0; i < 500; ++i) small.push_back(rng.pareto(1.0, 1.2));
  for (int i = 0; i < 50000; ++i) large.push_back(rng.pareto(1.0, 1.2));
  CHECK(hill_fit(large, 1.0).std_error < hill_fit(small, 1.0).std_error);
}

TEST_CASE("cutoff selection") {
  SECTION("explicit passthrough") {
    std::vector<double> v{1, 2, 3};
    CHECK(select_cutoff(v, Explicit{10.0}) == 10.0);
    CHECK_THROWS_AS(select_cutoff(v, Explicit{0.0}), InvalidArgument);
  }
  SECTION("median by nearest rank on {1..100} is 50") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    CHECK(select_cutoff(v, FixedQuantile{0.5}) == 50.0);
  }
  SECTION("order does not matter") {
    std::vector<double> v{9, 1, 5, 3, 7};
    CHECK(select_cutoff(v, FixedQuantile{0.5}) == 5.0);
  }
  SECTION("high quantile of identical values is that value") {
    std::vector<double> v(10, 4.25);
    CHECK(select_cutoff(v, FixedQuantile{0.9}) == 4.25);
  }
  SECTION("quantile must lie in (0,1); input non-empty") {
    std::vector<double> v{1, 2};
    CHECK_THROWS_AS(select_cutoff(v, FixedQuantile{0.0}), InvalidArgument);
    CHECK_THROWS_AS(select_cutoff(v, FixedQuantile{1.0}), InvalidArgument);
    CHECK_THROWS_AS(select_cutoff({}, FixedQuantile{0.5}), InvalidArgument);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dftlab/oracle.hpp"

using namespace dftlab;

TEST_CASE("discrete law validation") {
  CHECK_THROWS_AS(discrete_law({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(discrete_law({1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(discrete_law({1.0, 2.0}, {0.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(discrete_law({1.0, 2.0}, {0.6, 0.6}), std::invalid_argument);
  const DiscreteLaw r = rademacher_law();
  REQUIRE(r.support.size() == 2);
  CHECK(r.probs[0] == 0.5);
}

TEST_CASE("exact exceedance pins") {
  const DiscreteLaw law = rademacher_law();
  CHECK(exact_exceedance(law, 0.0, 2, 1.8) == 0.5);
  CHECK(exact_exceedance(law, 0.0, 3, 10.0) == 0.0);
  CHECK(exact_exceedance(law, 0.0, 10, 2.5) == 0.68359375);
  CHECK(exact_exceedance(law, 1.0, 12, 3.0) == 0.66015625);
  CHECK(exact_exceedance(law, 2.5, 12, 2.5) == 0.8447265625);
  // at t = pi/2 the sums live on the Gaussian integers; these two values
  // are 7/8 and 179/512 by exact lattice counting
  CHECK(exact_exceedance(law, kPi / 2.0, 8, 2.2) == 0.875);
  CHECK(exact_exceedance(law, kPi / 2.0, 12, 4.2) == 0.349609375);
  // asymmetric three point law
  const DiscreteLaw three = discrete_law({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
  CHECK(exact_exceedance(three, 0.0, 2, 0.5) == 0.75);
}

TEST_CASE("lattice walk cross check at t = 0") {
  const DiscreteLaw law = rademacher_law();
  const struct {
    std::uint64_t n;
    double thr;
    double expect;
  } cases[] = {{12, 3.5, 0.533203125}, {12, 2.5, 0.7626953125}, {8, 1.5, 0.9375}};
  for (const auto& c : cases) {
    const double dp = rademacher_t0_exceedance(c.n, c.thr);
    const double viaenum = exact_exceedance(law, 0.0, c.n, c.thr);
    CHECK(dp == c.expect);
    CHECK(viaenum == c.expect);
  }
  // the DP scales far beyond the enumeration guard
  const double big = rademacher_t0_exceedance(4096, 64.5);
  CHECK(big > 0.0);
  CHECK(big < 1.0);
  CHECK_THROWS_AS(rademacher_t0_exceedance(5000, 1.0), std::overflow_error);
  CHECK_THROWS_AS(rademacher_t0_exceedance(0, 1.0), std::invalid_argument);
}

TEST_CASE("prefix max distribution atoms") {
  const DiscreteLaw law = rademacher_law();

  const auto d2q = exact_prefix_max_distribution(law, kPi / 2.0, 2);
  REQUIRE(d2q.size() == 1);
  CHECK(d2q[0].first == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d2q[0].second == 1.0);

  const auto d20 = exact_prefix_max_distribution(law, 0.0, 2);
  REQUIRE(d20.size() == 2);
  CHECK(d20[0].first == 1.0);
  CHECK(d20[0].second == 0.5);
  CHECK(d20[1].first == 2.0);
  CHECK(d20[1].second == 0.5);

  const auto d41 = exact_prefix_max_distribution(law, 1.0, 4);
  REQUIRE(d41.size() == 6);
  const double values[6] = {1.0,
                            1.0361388959997024,
                            1.9576244974699009,
                            2.0806046117362791,
                            2.6571769991735898,
                            2.9538410504165133};
  const double probs[6] = {0.125, 0.125, 0.25, 0.125, 0.25, 0.125};
  double mass = 0.0;
  for (int i = 0; i < 6; ++i) {
    CHECK(d41[i].first == Catch::Approx(values[i]).epsilon(1e-12));
    CHECK(d41[i].second == probs[i]);
    mass += d41[i].second;
  }
  CHECK(mass == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distribution is consistent with the exceedance") {
  const DiscreteLaw law = rademacher_law();
  const auto dist = exact_prefix_max_distribution(law, 1.0, 8);
  // P(max > thr) recomputed from the atom masses
  for (double thr : {1.5, 2.0, 3.0, 4.5}) {
    double expect = 0.0;
    for (const auto& [v, p] : dist)
      if (v > thr) expect += p;
    CHECK(exact_exceedance(law, 1.0, 8, thr) == Catch::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("quantile thresholds sit between atoms") {
  const std::vector<std::pair<double, double>> dist = {{1.0, 0.5}, {2.0, 0.5}};
  CHECK(threshold_for_quantile(dist, 0.25) == 0.5);
  CHECK(threshold_for_quantile(dist, 0.5) == 0.5);
  CHECK(threshold_for_quantile(dist, 0.75) == 1.5);
  CHECK(threshold_for_quantile(dist, 0.9999) == 1.5);
  const std::vector<std::pair<double, double>> one = {{3.0, 1.0}};
  CHECK(threshold_for_quantile(one, 0.5) == 1.5);
  CHECK_THROWS_AS(threshold_for_quantile(dist, 0.0), std::domain_error);
  CHECK_THROWS_AS(threshold_for_quantile(dist, 1.0), std::domain_error);
  CHECK_THROWS_AS(threshold_for_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("enumeration guards") {
  const DiscreteLaw law = rademacher_law();
  CHECK_THROWS_AS(exact_exceedance(law, 0.0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_exceedance(law, 0.0, 25, 1.0), std::overflow_error);
  CHECK_NOTHROW(exact_exceedance(law, 0.0, 20, 100.0));
  const DiscreteLaw three = discrete_law({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
  CHECK_THROWS_AS(exact_exceedance(three, 0.0, 16, 1.0), std::overflow_error);
  CHECK_NOTHROW(exact_exceedance(three, 0.0, 15, 100.0));
  CHECK_THROWS_AS(exact_prefix_max_distribution(law, 0.0, 5000), std::overflow_error);
}

TEST_CASE("negative t matches positive t") {
  const DiscreteLaw law = rademacher_law();
  CHECK(exact_exceedance(law, -1.0, 12, 3.0) == exact_exceedance(law, 1.0, 12, 3.0));
  const auto a = exact_prefix_max_distribution(law, -2.5, 6);
  const auto b = exact_prefix_max_distribution(law, 2.5, 6);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == b[i].first);
    CHECK(a[i].second == b[i].second);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "dftlab/distributions.hpp"
#include "dftlab/monte_carlo.hpp"
#include "dftlab/oracle.hpp"

using namespace dftlab;

TEST_CASE("seed derivation is collision free and well mixed") {
  CHECK(derive_seed(20260818, 1) == 3166027334268849483ull);
  for (std::uint64_t master : {std::uint64_t{0}, std::uint64_t{20260818}}) {
    std::set<std::uint64_t> seen;
    int worst = 64;
    double mean = 0.0;
    for (std::uint64_t i = 0; i < 4096; ++i) {
      seen.insert(derive_seed(master, i));
      const int pc = std::popcount(derive_seed(master, i) ^ derive_seed(master, i + 1));
      worst = std::min(worst, pc);
      mean += pc;
    }
    CHECK(seen.size() == 4096);
    CHECK(worst >= 16);
    CHECK(mean / 4096.0 == Catch::Approx(32.0).margin(1.5));
  }
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}

TEST_CASE("wilson interval pins") {
  const WilsonInterval a = wilson_interval99(50, 100);
  CHECK(a.low == Catch::Approx(0.37527962504483986).epsilon(1e-12));
  CHECK(a.high == Catch::Approx(0.6247203749551602).epsilon(1e-12));
  const WilsonInterval b = wilson_interval99(0, 100);
  CHECK(b.low == 0.0);
  CHECK(b.high == Catch::Approx(0.062220687715822974).epsilon(1e-12));
  const WilsonInterval c = wilson_interval99(100, 100);
  CHECK(c.low == Catch::Approx(0.9377793122841772).epsilon(1e-12));
  CHECK(c.high == 1.0);
  const WilsonInterval d = wilson_interval99(3, 1000);
  CHECK(d.low == Catch::Approx(0.0007581012310614666).epsilon(1e-12));
  CHECK(d.high == Catch::Approx(0.011793516682924922).epsilon(1e-12));
  CHECK_THROWS_AS(wilson_interval99(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval99(5, 4), std::invalid_argument);
}

TEST_CASE("tail estimate hits a known two step probability") {
  // Rademacher, t = 0: |S_1| = 1 never exceeds 1.8, |S_2| = 2 with prob 1/2
  const TailProbEstimate e =
      estimate_tail_prob_at_threshold(rademacher(), 0.0, 2, 1.8, 2000, 12345);
  CHECK(e.n == 2);
  CHECK(e.threshold == 1.8);
  CHECK(e.reps == 2000);
  CHECK(e.p_hat == static_cast<double>(e.hits) / 2000.0);
  CHECK(e.ci_low <= 0.5);
  CHECK(e.ci_high >= 0.5);
  CHECK(e.ci_low >= 0.0);
  CHECK(e.ci_high <= 1.0);
}

TEST_CASE("estimates are thread count invariant") {
  const TailProbEstimate a =
      estimate_tail_prob_at_threshold(symmetric_pareto(1.8), 1.0, 64, 10.0, 500, 999, 0, 1);
  const TailProbEstimate b =
      estimate_tail_prob_at_threshold(symmetric_pareto(1.8), 1.0, 64, 10.0, 500, 999, 0, 3);
  CHECK(a.hits == b.hits);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.ci_low == b.ci_low);
}

TEST_CASE("exceedance decreases in epsilon") {
  const TailProbEstimate lo =
      estimate_tail_prob(symmetric_pareto(1.8), 0.5, 128, 0.5, 1.2, 400, 777);
  const TailProbEstimate hi =
      estimate_tail_prob(symmetric_pareto(1.8), 0.5, 128, 1.5, 1.2, 400, 777);
  CHECK(lo.hits >= hi.hits);
  CHECK(lo.threshold == 0.5 * std::pow(128.0, 1.0 / 1.2));
  CHECK(hi.threshold == 1.5 * std::pow(128.0, 1.0 / 1.2));
}

TEST_CASE("curve points use disjoint seed blocks") {
  const std::vector<std::uint64_t> grid = {4, 8, 16};
  const ExceedanceCurve curve =
      estimate_exceedance_curve(rademacher(), 0.3, grid, 1.0, 1.3, 150, 4242, 0, 2, 1.6);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.p == 1.6);
  CHECK(curve.r == 1.3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(curve.points[j].n == grid[j]);
    const TailProbEstimate solo = estimate_tail_prob(
        rademacher(), 0.3, grid[j], 1.0, 1.3, 150, 4242, static_cast<std::uint64_t>(j) * 150);
    CHECK(curve.points[j].hits == solo.hits);
    CHECK(curve.points[j].threshold == solo.threshold);
  }
}

TEST_CASE("estimate validation") {
  CHECK_THROWS_AS(estimate_tail_prob_at_threshold(rademacher(), 0.0, 4, 1.0, 99, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_tail_prob_at_threshold(rademacher(), 0.0, 4, -1.0, 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_tail_prob_at_threshold(rademacher(), 3.5, 4, 1.0, 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_tail_prob(rademacher(), 0.0, 4, 0.0, 1.2, 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_tail_prob(rademacher(), 0.0, 4, 1.0, 2.0, 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(
      estimate_exceedance_curve(rademacher(), 0.0, {8, 8}, 1.0, 1.2, 100, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(estimate_exceedance_curve(rademacher(), 0.0, {}, 1.0, 1.2, 100, 1),
                  std::invalid_argument);
}

TEST_CASE("estimates cover exact probabilities across a mini battery") {
  // exact values from the enumeration oracle; intervals are 99 percent, so
  // 20 fixed-seed cases landing 19+ is the expected picture
  const DiscreteLaw law = rademacher_law();
  const struct {
    double t;
    std::uint64_t n;
    double thr;
  } cases[] = {
      {0.0, 2, 1.8},  {0.0, 10, 2.5}, {1.0, 12, 3.0},  {2.5, 12, 2.5},
      {kPi / 2, 8, 2.2}, {kPi / 2, 12, 4.2}, {0.0, 4, 1.5},  {1.0, 8, 2.0},
      {2.5, 8, 1.0},  {0.5, 6, 2.0},  {1.5, 10, 3.0},  {0.25, 12, 4.0},
      {3.0, 12, 2.0}, {0.0, 12, 3.5}, {1.0, 4, 1.0},   {2.0, 10, 2.5},
      {0.75, 8, 2.5}, {1.25, 6, 1.5}, {2.75, 12, 3.5}, {0.1, 12, 5.0},
  };
  int covered = 0;
  std::uint64_t base = 0;
  for (const auto& c : cases) {
    const double exact = exact_exceedance(law, c.t, c.n, c.thr);
    const TailProbEstimate est =
        estimate_tail_prob_at_threshold(rademacher(), c.t, c.n, c.thr, 2000, 12345, base);
    base += 2000;
    covered += (est.ci_low <= exact && exact <= est.ci_high);
  }
  CHECK(covered >= 19);
}

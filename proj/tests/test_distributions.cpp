#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dftlab/distributions.hpp"

using namespace dftlab;

namespace {

// Simpson's rule on [a, b] with an even number of panels.
template <typename F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("factory validation and labels") {
  CHECK(symmetric_pareto(1.8).label == "pareto(1.8)");
  CHECK(rademacher().label == "rademacher");
  CHECK(pairwise_rademacher(4).label == "pairwise(4)");
  CHECK(scaled_family(symmetric_pareto(1.8)).label == "scaled[pareto(1.8)]");
  CHECK_THROWS_AS(symmetric_pareto(0.0), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_pareto(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(pairwise_rademacher(0), std::invalid_argument);
  CHECK_THROWS_AS(pairwise_rademacher(41), std::invalid_argument);
  CHECK_THROWS_AS(scaled_family(scaled_family(rademacher())), std::invalid_argument);
  CHECK_THROWS_AS(scaled_family(pairwise_rademacher(3)), std::invalid_argument);
}

TEST_CASE("scale rule") {
  const DistributionSpec s = scaled_family(rademacher());
  CHECK(scale_at(s, 1) == 1.0);
  CHECK(scale_at(s, 3) == Catch::Approx(1.0 / (1.0 + std::log(3.0))).epsilon(1e-15));
  CHECK(scale_at(rademacher(), 17) == 1.0);
  CHECK_THROWS_AS(scale_at(s, 0), std::invalid_argument);
}

TEST_CASE("tail probabilities") {
  const DistributionSpec par = symmetric_pareto(1.8);
  CHECK(tail_prob(par, 0.0) == 1.0);
  CHECK(tail_prob(par, 1.0) == 1.0);
  CHECK(tail_prob(par, 2.0) == Catch::Approx(0.2871745887492587).epsilon(1e-15));
  CHECK(tail_prob(rademacher(), 0.5) == 1.0);
  CHECK(tail_prob(rademacher(), 1.0) == 0.0);
  CHECK_THROWS_AS(tail_prob(par, -0.1), std::domain_error);
  const DistributionSpec sc = scaled_family(symmetric_pareto(1.8));
  CHECK_THROWS_AS(tail_prob(sc, 2.0), std::invalid_argument);
  const double c3 = scale_at(sc, 3);
  CHECK(tail_prob_at(sc, 3, 2.0) == Catch::Approx(std::pow(2.0 / c3, -1.8)).epsilon(1e-15));
  CHECK(tail_prob_at(par, 5, 2.0) == tail_prob(par, 2.0));
}

TEST_CASE("closed form moments") {
  const DistributionSpec par = symmetric_pareto(1.8);
  CHECK(moment_abs(par, 1.0) == Catch::Approx(2.25).epsilon(1e-15));
  CHECK(moment_abs(par, 1.5) == Catch::Approx(6.0).epsilon(1e-15));
  CHECK(std::isinf(moment_abs(par, 1.8)));
  CHECK(std::isinf(moment_abs(par, 2.0)));
  CHECK(moment_abs(rademacher(), 1.3) == 1.0);
  CHECK(moment_abs(scaled_family(symmetric_pareto(1.8)), 1.0) == 2.25);

  CHECK(truncated_second_moment(par, 0.5) == 0.0);
  CHECK(truncated_second_moment(par, 2.0) ==
        Catch::Approx(1.3382851949733159).epsilon(1e-14));
  CHECK(truncated_second_moment(symmetric_pareto(2.0), std::exp(1.0)) ==
        Catch::Approx(2.0).epsilon(1e-14));
  CHECK(truncated_second_moment(rademacher(), 2.0) == 1.0);
  CHECK(truncated_second_moment(rademacher(), 0.5) == 0.0);

  CHECK(tail_first_moment(par, 2.0) == Catch::Approx(1.2922856493716641).epsilon(1e-14));
  CHECK(tail_first_moment(par, 0.5) == Catch::Approx(2.25).epsilon(1e-14));
  CHECK(std::isinf(tail_first_moment(symmetric_pareto(0.9), 2.0)));
  CHECK(tail_first_moment(rademacher(), 0.5) == 1.0);
  CHECK(tail_first_moment(rademacher(), 1.0) == 0.0);
}

TEST_CASE("moments against quadrature") {
  const double alpha = 1.8;
  const DistributionSpec par = symmetric_pareto(alpha);
  // E[X^2 1{|X| <= c}] = alpha int_0^{ln c} e^{(2-alpha)s} ds after x = e^s
  for (double c : {1.5, 2.0, 7.0}) {
    const double num =
        alpha * simpson([&](double s) { return std::exp((2.0 - alpha) * s); }, 0.0,
                        std::log(c), 4096);
    CHECK(truncated_second_moment(par, c) == Catch::Approx(num).epsilon(1e-10));
  }
  // E[|X| 1{|X| > c}] = alpha c^{1-alpha} int_0^inf e^{(1-alpha)s} ds after x = c e^s
  for (double c : {1.0, 2.0, 5.0}) {
    const double smax = 60.0 / (alpha - 1.0);
    const double num = alpha * std::pow(c, 1.0 - alpha) *
                       simpson([&](double s) { return std::exp((1.0 - alpha) * s); }, 0.0,
                               smax, 8192);
    CHECK(tail_first_moment(par, c) == Catch::Approx(num).epsilon(1e-9));
  }
}

TEST_CASE("per index moments of the scaled family") {
  const DistributionSpec sc = scaled_family(symmetric_pareto(1.8));
  for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{5}, std::uint64_t{100}}) {
    const double ck = scale_at(sc, k);
    CHECK(truncated_second_moment_at(sc, k, 3.0) ==
          Catch::Approx(ck * ck * truncated_second_moment(symmetric_pareto(1.8), 3.0 / ck))
              .epsilon(1e-14));
    CHECK(tail_first_moment_at(sc, k, 3.0) ==
          Catch::Approx(ck * tail_first_moment(symmetric_pareto(1.8), 3.0 / ck))
              .epsilon(1e-14));
  }
  CHECK(truncated_second_moment_at(rademacher(), 9, 2.0) == 1.0);
}

TEST_CASE("moment profile") {
  const MomentProfile mp = make_moment_profile(symmetric_pareto(1.8), 1.5, 1.2);
  CHECK(mp.abs_moment_p == Catch::Approx(6.0).epsilon(1e-15));
  CHECK(mp.abs_moment_1 == Catch::Approx(2.25).epsilon(1e-15));
  CHECK(std::isinf(make_moment_profile(symmetric_pareto(1.2), 1.5, 1.2).abs_moment_p));
  CHECK_THROWS_AS(make_moment_profile(rademacher(), 2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(make_moment_profile(rademacher(), 1.5, 1.6), std::domain_error);
  CHECK_THROWS_AS(make_moment_profile(rademacher(), 1.5, 0.9), std::domain_error);
}

TEST_CASE("sampler determinism pins") {
  Sampler sp(symmetric_pareto(1.8), 42);
  CHECK(sp.next() == 1.1688466882704736);
  CHECK(sp.next() == 1.2824582194207497);
  CHECK(sp.next() == 1.1714433303391247);
  Sampler sr(rademacher(), 42);
  const double expect[12] = {1, 1, 1, 1, -1, 1, 1, 1, 1, -1, -1, 1};
  for (double e : expect) CHECK(sr.next() == e);
  const std::vector<double> a = sample(symmetric_pareto(1.8), 99, 50);
  const std::vector<double> b = sample(symmetric_pareto(1.8), 99, 50);
  CHECK(a == b);
}

TEST_CASE("scaled family draws are the base draws times the scale") {
  const DistributionSpec base = symmetric_pareto(1.8);
  const DistributionSpec sc = scaled_family(base);
  Sampler ss(sc, 42);
  Sampler sb(base, 42);
  for (std::uint64_t k = 1; k <= 200; ++k) {
    const double scaled = ss.next();
    const double raw = sb.next();
    CHECK(scaled == raw * scale_at(sc, k));
  }
}

TEST_CASE("pareto sampling matches the law") {
  const DistributionSpec par = symmetric_pareto(1.8);
  Sampler s(par, 20260818);
  const int N = 200000;
  int above2 = 0, positive = 0;
  std::vector<double> mags;
  mags.reserve(N);
  for (int i = 0; i < N; ++i) {
    const double x = s.next();
    const double m = std::fabs(x);
    REQUIRE(m >= 1.0);
    above2 += m > 2.0;
    positive += x > 0.0;
    mags.push_back(m);
  }
  // P(|X| > 2) = 2^{-1.8}; binomial SE about 0.001 at this N
  CHECK(static_cast<double>(above2) / N == Catch::Approx(0.2871745887492587).margin(0.005));
  // sign symmetry
  CHECK(static_cast<double>(positive) / N == Catch::Approx(0.5).margin(0.005));
  // median |X| = 2^{1/1.8}
  std::nth_element(mags.begin(), mags.begin() + N / 2, mags.end());
  CHECK(mags[N / 2] == Catch::Approx(std::pow(2.0, 1.0 / 1.8)).margin(0.01));
}

TEST_CASE("pairwise rademacher structure") {
  const DistributionSpec pw = pairwise_rademacher(4);
  CHECK(max_sample_length(pw) == 15);
  CHECK(max_sample_length(rademacher()) == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(validate_sample_length(pw, 16), std::length_error);
  CHECK_THROWS_AS(validate_sample_length(pw, 0), std::invalid_argument);

  // the stream realizes X_k = (-1)^{popcount(k & mask)} with mask drawn from
  // the seeded generator
  for (std::uint64_t seed : {std::uint64_t{7}, std::uint64_t{123}, std::uint64_t{500}}) {
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = rng() & 15;
    const std::vector<double> xs = pairwise_independent_rademacher(4, seed);
    REQUIRE(xs.size() == 15);
    for (std::uint64_t k = 1; k <= 15; ++k) {
      const double want = (std::popcount(k & mask) % 2 == 0) ? 1.0 : -1.0;
      CHECK(xs[k - 1] == want);
    }
  }

  Sampler s(pw, 7);
  for (int i = 0; i < 15; ++i) {
    const double v = s.next();
    CHECK((v == 1.0 || v == -1.0));
  }
  CHECK_THROWS_AS(s.next(), std::length_error);

  // pairwise balance: averaging X_j X_k over the mask distribution kills
  // every pair with j != k
  const int seeds = 4000;
  double e1 = 0.0, e12 = 0.0, e514 = 0.0;
  for (int i = 0; i < seeds; ++i) {
    const std::vector<double> xs = pairwise_independent_rademacher(4, 1000 + i);
    e1 += xs[0];
    e12 += xs[0] * xs[1];
    e514 += xs[4] * xs[13];
  }
  CHECK(e1 / seeds == Catch::Approx(0.0).margin(0.05));
  CHECK(e12 / seeds == Catch::Approx(0.0).margin(0.05));
  CHECK(e514 / seeds == Catch::Approx(0.0).margin(0.05));
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dftlab/distributions.hpp"
#include "dftlab/parallel.hpp"
#include "dftlab/sequence_engine.hpp"

namespace dftlab {

// Replication seeds come from the splitmix64 finalizer, a bijection of the
// index space for every master, so distinct indices never collide.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + index * 0x9E3779B97F4A7C15ull;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Two-sided 99% normal quantile, pinned.
inline constexpr double kZ99 = 2.5758293035489004;

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

inline WilsonInterval wilson_interval99(std::uint64_t hits, std::uint64_t reps) {
  if (reps == 0) throw std::invalid_argument("wilson interval needs reps >= 1");
  if (hits > reps) throw std::invalid_argument("hits exceed reps");
  const double n = static_cast<double>(reps);
  const double ph = static_cast<double>(hits) / n;
  const double z2 = kZ99 * kZ99;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = (kZ99 / denom) * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
  // at the boundary the endpoint is exactly 0 or 1; don't let rounding
  // pull it inside and spoil coverage of degenerate exact probabilities
  const double low = hits == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = hits == reps ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

struct TailProbEstimate {
  std::uint64_t n = 0;
  double t = 0.0;
  double threshold = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t reps = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// P[max_{k <= n} |S_k(t)| > threshold] by replication. Replication i uses
// the sampler seeded with derive_seed(master_seed, seed_base + i), so
// callers can lay out disjoint index blocks across grid points.
inline TailProbEstimate estimate_tail_prob_at_threshold(
    const DistributionSpec& spec, double t, std::uint64_t n, double threshold,
    std::uint64_t reps, std::uint64_t master_seed, std::uint64_t seed_base = 0,
    unsigned threads = 1) {
  validate_t(t);
  validate_sample_length(spec, n);
  if (reps < 100) throw std::invalid_argument("tail estimates need reps >= 100");
  if (!(threshold >= 0.0)) throw std::domain_error("threshold must be nonnegative");
  const std::uint64_t hits = parallel_count(reps, threads, [&](std::uint64_t i) {
    Sampler s(spec, derive_seed(master_seed, seed_base + i));
    return prefix_max_magnitude([&] { return s.next(); }, n, std::fabs(t)) > threshold;
  });
  const WilsonInterval ci = wilson_interval99(hits, reps);
  TailProbEstimate e;
  e.n = n;
  e.t = t;
  e.threshold = threshold;
  e.hits = hits;
  e.reps = reps;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  return e;
}

inline TailProbEstimate estimate_tail_prob(const DistributionSpec& spec, double t,
                                           std::uint64_t n, double epsilon, double r,
                                           std::uint64_t reps, std::uint64_t master_seed,
                                           std::uint64_t seed_base = 0, unsigned threads = 1) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(r >= 1.0 && r < 2.0)) throw std::domain_error("r must lie in [1, 2)");
  const double threshold = epsilon * std::pow(static_cast<double>(n), 1.0 / r);
  return estimate_tail_prob_at_threshold(spec, t, n, threshold, reps, master_seed, seed_base,
                                         threads);
}

struct ExceedanceCurve {
  DistributionSpec spec;
  double p = std::numeric_limits<double>::quiet_NaN();
  double r = 0.0;
  double epsilon = 0.0;
  double t = 0.0;
  std::vector<TailProbEstimate> points;
};

// One estimate per grid point with thresholds epsilon * n^{1/r}; point j
// occupies seed indices [seed_base + j*reps, seed_base + (j+1)*reps).
inline ExceedanceCurve estimate_exceedance_curve(
    const DistributionSpec& spec, double t, const std::vector<std::uint64_t>& n_grid,
    double epsilon, double r, std::uint64_t reps, std::uint64_t master_seed,
    std::uint64_t seed_base = 0, unsigned threads = 1,
    double p_record = std::numeric_limits<double>::quiet_NaN()) {
  if (n_grid.empty()) throw std::invalid_argument("exceedance curve needs a nonempty grid");
  for (std::size_t j = 1; j < n_grid.size(); ++j)
    if (n_grid[j] <= n_grid[j - 1])
      throw std::invalid_argument("exceedance curve grid must be strictly increasing");
  ExceedanceCurve curve;
  curve.spec = spec;
  curve.p = p_record;
  curve.r = r;
  curve.epsilon = epsilon;
  curve.t = t;
  curve.points.reserve(n_grid.size());
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    curve.points.push_back(estimate_tail_prob(spec, t, n_grid[j], epsilon, r, reps, master_seed,
                                              seed_base + static_cast<std::uint64_t>(j) * reps,
                                              threads));
  }
  return curve;
}

}  // namespace dftlab

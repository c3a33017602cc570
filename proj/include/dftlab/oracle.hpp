#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dftlab/sequence_engine.hpp"

namespace dftlab {

struct DiscreteLaw {
  std::vector<double> support;
  std::vector<double> probs;
};

inline DiscreteLaw discrete_law(std::vector<double> support, std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size())
    throw std::invalid_argument("discrete law needs matching nonempty support and probs");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw std::invalid_argument("discrete law probs must be positive");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("discrete law probs must sum to 1");
  return {std::move(support), std::move(probs)};
}

inline DiscreteLaw rademacher_law() { return discrete_law({-1.0, 1.0}, {0.5, 0.5}); }

namespace detail {

// m^n <= 2^24 keeps full enumeration at desk scale; the recursion depth is
// also capped so single-atom laws cannot blow the stack.
inline void check_enumeration_size(const DiscreteLaw& law, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("enumeration needs n >= 1");
  if (n > 4096) throw std::overflow_error("enumeration guard: n too large");
  const double states = static_cast<double>(n) * std::log2(static_cast<double>(law.support.size()));
  if (states > 24.0 + 1e-9) throw std::overflow_error("enumeration guard: more than 2^24 paths");
}

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct Enumerator {
  const DiscreteLaw* law = nullptr;
  std::vector<std::complex<double>> phases;  // phases[k-1] = e^{ik|t|}
  std::uint64_t n = 0;
  double threshold = 0.0;
  KahanSum exceed;
  std::vector<std::pair<double, double>>* leaves = nullptr;

  // First-passage pruning: once |S_k| exceeds, the remaining coordinates
  // contribute their full conditional mass.
  void walk_exceed(std::uint64_t k, double sr, double si, double prob) {
    for (std::size_t a = 0; a < law->support.size(); ++a) {
      const double v = law->support[a];
      const double nr = sr + phases[k - 1].real() * v;
      const double ni = si + phases[k - 1].imag() * v;
      const double pr = prob * law->probs[a];
      if (std::sqrt(nr * nr + ni * ni) > threshold) {
        exceed.add(pr);
      } else if (k < n) {
        walk_exceed(k + 1, nr, ni, pr);
      }
    }
  }

  void walk_leaves(std::uint64_t k, double sr, double si, double pm2, double prob) {
    for (std::size_t a = 0; a < law->support.size(); ++a) {
      const double v = law->support[a];
      const double nr = sr + phases[k - 1].real() * v;
      const double ni = si + phases[k - 1].imag() * v;
      const double m2 = nr * nr + ni * ni;
      const double pm2b = m2 > pm2 ? m2 : pm2;
      const double pr = prob * law->probs[a];
      if (k == n) {
        leaves->push_back({std::sqrt(pm2b), pr});
      } else {
        walk_leaves(k + 1, nr, ni, pm2b, pr);
      }
    }
  }
};

inline std::vector<std::complex<double>> phase_table(double t, std::uint64_t n) {
  PhaseStream ph(std::fabs(t));
  std::vector<std::complex<double>> phases;
  phases.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) phases.push_back(ph.next());
  return phases;
}

}  // namespace detail

// P[max_{k <= n} |S_k(t)| > threshold] by exhaustive enumeration. Uses the
// same phase arithmetic as the scans, so atom magnitudes agree bit for bit
// with simulated paths.
inline double exact_exceedance(const DiscreteLaw& law, double t, std::uint64_t n,
                               double threshold) {
  validate_t(t);
  detail::check_enumeration_size(law, n);
  detail::Enumerator e;
  e.law = &law;
  e.phases = detail::phase_table(t, n);
  e.n = n;
  e.threshold = threshold;
  e.walk_exceed(1, 0.0, 0.0, 1.0);
  return e.exceed.sum;
}

// Atoms (value, prob) of max_{k <= n} |S_k(t)|, sorted by value, with
// values coalesced at 1e-9 resolution.
inline std::vector<std::pair<double, double>> exact_prefix_max_distribution(const DiscreteLaw& law,
                                                                            double t,
                                                                            std::uint64_t n) {
  validate_t(t);
  detail::check_enumeration_size(law, n);
  std::vector<std::pair<double, double>> leaves;
  detail::Enumerator e;
  e.law = &law;
  e.phases = detail::phase_table(t, n);
  e.n = n;
  e.leaves = &leaves;
  e.walk_leaves(1, 0.0, 0.0, 0.0, 1.0);
  std::sort(leaves.begin(), leaves.end());
  std::vector<std::pair<double, double>> atoms;
  detail::KahanSum cluster;
  double rep = 0.0;
  bool open = false;
  for (const auto& [v, pr] : leaves) {
    if (open && v - rep <= 1e-9) {
      cluster.add(pr);
    } else {
      if (open) atoms.emplace_back(rep, cluster.sum);
      cluster = {};
      cluster.add(pr);
      rep = v;
      open = true;
    }
  }
  if (open) atoms.emplace_back(rep, cluster.sum);
  detail::KahanSum total;
  for (const auto& [v, pr] : atoms) total.add(pr);
  if (std::fabs(total.sum - 1.0) > 1e-10)
    throw std::logic_error("prefix max distribution mass drifted from 1");
  return atoms;
}

// Independent cross-check for the t = 0 Rademacher case: S_k is a +-1 walk,
// tracked state by state with exceeded states absorbed on first passage.
// All masses are dyadic rationals, so the result is exact and must equal
// the enumeration value bit for bit.
inline double rademacher_t0_exceedance(std::uint64_t n, double threshold) {
  if (n == 0) throw std::invalid_argument("needs n >= 1");
  if (n > 4096) throw std::overflow_error("walk guard: n too large");
  const std::size_t width = 2 * static_cast<std::size_t>(n) + 1;
  std::vector<double> live(width, 0.0), next(width, 0.0);
  live[n] = 1.0;  // offset n encodes state 0
  double exceed = 0.0;
  for (std::uint64_t step = 1; step <= n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t idx = 0; idx < width; ++idx) {
      const double mass = live[idx];
      if (mass == 0.0) continue;
      const long long s = static_cast<long long>(idx) - static_cast<long long>(n);
      for (int d = -1; d <= 1; d += 2) {
        const long long v = s + d;
        const double half = mass * 0.5;
        if (std::fabs(static_cast<double>(v)) > threshold) {
          exceed += half;
        } else {
          next[static_cast<std::size_t>(v + static_cast<long long>(n))] += half;
        }
      }
    }
    live.swap(next);
  }
  return exceed;
}

// Midpoint of the atom gap where the prefix-max CDF first reaches q; the
// lowest atom is halved when q falls inside it. Gives thresholds that sit
// strictly between atoms, so exceedance probabilities are insensitive to
// rounding at the atom boundary.
inline double threshold_for_quantile(const std::vector<std::pair<double, double>>& dist,
                                     double q) {
  if (dist.empty()) throw std::invalid_argument("empty distribution");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("quantile must lie in (0, 1)");
  double cum = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    cum += dist[i].second;
    if (cum >= q - 1e-12) {
      if (i == 0) return dist[0].first / 2.0;
      return 0.5 * (dist[i - 1].first + dist[i].first);
    }
  }
  return dist.back().first / 2.0;  // unreachable: the CDF reaches 1 in-loop
}

}  // namespace dftlab

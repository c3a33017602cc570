#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dftlab/distributions.hpp"
#include "dftlab/monte_carlo.hpp"
#include "dftlab/oracle.hpp"
#include "dftlab/parallel.hpp"
#include "dftlab/sequence_engine.hpp"

namespace dftlab {

enum class SeriesClass { Convergent, Divergent, Indeterminate };

inline const char* to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::Convergent:
      return "Convergent";
    case SeriesClass::Divergent:
      return "Divergent";
    case SeriesClass::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

struct SeriesDiagnostic {
  double weights_exponent = 0.0;
  std::vector<std::pair<double, double>> partial_sums;  // (grid index, running total)
  double fitted_decay = 0.0;
  SeriesClass classification = SeriesClass::Indeterminate;
  double tolerance_used = 0.0;
};

inline constexpr double kSeriesTailTol = 0.01;
inline constexpr double kSeriesExponentMargin = 0.1;

// OLS slope of log a vs log x over positive terms. When at least four
// points sit in the upper half of the log-x range the fit is restricted to
// them: the saturated head of an exceedance curve says nothing about the
// asymptotic decay.
inline double fit_log_decay(const std::vector<std::pair<double, double>>& terms) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, a] : terms)
    if (x > 0.0 && a > 0.0) pts.emplace_back(std::log(x), std::log(a));
  if (pts.size() < 2) return 0.0;
  double lo = pts.front().first, hi = pts.front().first;
  for (const auto& [lx, la] : pts) {
    lo = std::min(lo, lx);
    hi = std::max(hi, lx);
  }
  const double half = 0.5 * (lo + hi);
  std::vector<std::pair<double, double>> upper;
  for (const auto& pt : pts)
    if (pt.first >= half) upper.push_back(pt);
  const auto& fitpts = upper.size() >= 4 ? upper : pts;
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, la] : fitpts) {
    mx += lx;
    my += la;
  }
  mx /= static_cast<double>(fitpts.size());
  my /= static_cast<double>(fitpts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, la] : fitpts) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (la - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Verdict from the recorded partial sums plus the fitted term decay.
// The last "dyadic block" is the increment since the largest recorded index
// at or below half the final index, and the previous block is built the
// same way from that predecessor. Convergent needs a relatively small last
// block AND summable fitted decay; Divergent needs growing blocks OR a
// clearly unsummable exponent; everything else is Indeterminate.
inline SeriesClass classify_series(const std::vector<std::pair<double, double>>& partial_sums,
                                   double fitted_decay, double weights_exponent,
                                   double tail_tol = kSeriesTailTol,
                                   double exponent_margin = kSeriesExponentMargin) {
  if (partial_sums.size() < 4)
    throw std::invalid_argument("classify_series needs at least 4 partial sums");
  const double total = partial_sums.back().second;
  if (total == 0.0) return SeriesClass::Convergent;

  auto block_before = [&](std::size_t i) -> std::optional<std::pair<double, std::size_t>> {
    const double half = partial_sums[i].first / 2.0;
    for (std::size_t j = i; j-- > 0;) {
      if (partial_sums[j].first <= half)
        return std::make_pair(partial_sums[i].second - partial_sums[j].second, j);
    }
    return std::nullopt;
  };

  const auto last = block_before(partial_sums.size() - 1);
  std::optional<std::pair<double, std::size_t>> prev;
  if (last) prev = block_before(last->second);

  const double decay = fitted_decay + weights_exponent;
  if (last && last->first <= tail_tol * std::fabs(total) && decay < -1.0 - exponent_margin)
    return SeriesClass::Convergent;
  const bool growing = last && prev && last->first > prev->first;
  if (growing || decay > -1.0 + exponent_margin) return SeriesClass::Divergent;
  return SeriesClass::Indeterminate;
}

namespace detail {

// Integer-resolution total of sum_n n^beta * w(n) where w is exact at the
// grid points and log-log interpolated between them (linear when a segment
// endpoint vanishes). Exact for power-law w. Partial sums are recorded at
// the grid points.
inline std::vector<std::pair<double, double>> weighted_integer_partials(
    const std::vector<std::uint64_t>& ns, const std::vector<double>& ws, double beta) {
  if (ns.back() > 100000000ull)
    throw std::invalid_argument("series grid exceeds the integer summation guard");
  std::vector<std::pair<double, double>> partials;
  partials.reserve(ns.size());
  KahanSum acc;
  std::size_t gi = 0;  // next grid point; between hits n lies in (ns[gi-1], ns[gi])
  for (std::uint64_t n = ns.front(); n <= ns.back(); ++n) {
    double w;
    if (n == ns[gi]) {
      w = ws[gi];
    } else {
      const double n0 = static_cast<double>(ns[gi - 1]);
      const double n1 = static_cast<double>(ns[gi]);
      const double w0 = ws[gi - 1];
      const double w1 = ws[gi];
      const double x = static_cast<double>(n);
      if (w0 > 0.0 && w1 > 0.0) {
        const double f = (std::log(x) - std::log(n0)) / (std::log(n1) - std::log(n0));
        w = std::exp(std::log(w0) + f * (std::log(w1) - std::log(w0)));
      } else {
        w = w0 + (w1 - w0) * (x - n0) / (n1 - n0);
      }
    }
    acc.add(std::pow(static_cast<double>(n), beta) * w);
    if (n == ns[gi]) {
      partials.emplace_back(static_cast<double>(n), acc.sum);
      ++gi;
    }
  }
  return partials;
}

inline void check_threshold_schedule(const std::vector<TailProbEstimate>& points, double epsilon,
                                     double r, const char* what) {
  for (const auto& pt : points) {
    const double want = epsilon * std::pow(static_cast<double>(pt.n), 1.0 / r);
    if (std::fabs(pt.threshold - want) > 1e-9 * std::max(1.0, want))
      throw std::invalid_argument(std::string(what) +
                                  ": estimates do not follow the epsilon * n^(1/r) schedule");
  }
}

}  // namespace detail

// Series sum_n n^{p/r - 2} phat(n), summed at integer resolution between the
// estimate grid points.
inline SeriesDiagnostic baum_katz_series(const ExceedanceCurve& curve, double p, double r) {
  if (!(p > 1.0 && p < 2.0)) throw std::domain_error("baum_katz_series requires 1 < p < 2");
  if (!(r >= 1.0 && r <= p)) throw std::domain_error("baum_katz_series requires 1 <= r <= p");
  if (curve.points.size() < 4)
    throw std::invalid_argument("baum_katz_series needs at least 4 grid points");
  std::vector<std::uint64_t> ns;
  std::vector<double> ws;
  std::vector<std::pair<double, double>> terms;
  for (const auto& pt : curve.points) {
    if (!ns.empty() && pt.n <= ns.back())
      throw std::invalid_argument("baum_katz_series needs a strictly increasing grid");
    ns.push_back(pt.n);
    ws.push_back(pt.p_hat);
    terms.emplace_back(static_cast<double>(pt.n), pt.p_hat);
  }
  detail::check_threshold_schedule(curve.points, curve.epsilon, r, "baum_katz_series");
  SeriesDiagnostic d;
  d.weights_exponent = p / r - 2.0;
  d.partial_sums = detail::weighted_integer_partials(ns, ws, d.weights_exponent);
  d.fitted_decay = fit_log_decay(terms);
  d.tolerance_used = kSeriesTailTol;
  d.classification = classify_series(d.partial_sums, d.fitted_decay, d.weights_exponent);
  return d;
}

// Dyadic reformulation: estimates at n = 2^N with thresholds
// epsilon * n^{1/p} become the terms of sum_N phat(2^N), indexed by N.
inline SeriesDiagnostic dyadic_series(const std::vector<TailProbEstimate>& estimates, double p) {
  if (!(p > 1.0 && p < 2.0)) throw std::domain_error("dyadic_series requires 1 < p < 2");
  if (estimates.size() < 4)
    throw std::invalid_argument("dyadic_series needs at least 4 estimates");
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    const std::uint64_t n = estimates[j].n;
    if (n < 2 || !std::has_single_bit(n))
      throw std::invalid_argument("dyadic_series needs n = 2^N with N >= 1");
    if (j > 0 && n <= estimates[j - 1].n)
      throw std::invalid_argument("dyadic_series needs a strictly increasing grid");
  }
  const double eps0 = estimates.front().threshold /
                      std::pow(static_cast<double>(estimates.front().n), 1.0 / p);
  detail::check_threshold_schedule(estimates, eps0, p, "dyadic_series");
  SeriesDiagnostic d;
  d.weights_exponent = 0.0;
  d.tolerance_used = kSeriesTailTol;
  detail::KahanSum acc;
  std::vector<std::pair<double, double>> terms;
  for (const auto& pt : estimates) {
    const double N = static_cast<double>(std::countr_zero(pt.n));
    acc.add(pt.p_hat);
    d.partial_sums.emplace_back(N, acc.sum);
    terms.emplace_back(N, pt.p_hat);
  }
  d.fitted_decay = fit_log_decay(terms);
  d.classification = classify_series(d.partial_sums, d.fitted_decay, d.weights_exponent);
  return d;
}

struct KolmogorovBound {
  std::vector<std::pair<std::uint64_t, double>> checkpoints;  // (K', partial lhs)
  double lhs = 0.0;
  double bound = 0.0;  // 4 E|X_1|
};

// sum_{k <= K} E[Y_k^2] / k^2 with Y_k = X_k 1{|X_k| <= k}, against 4 E|X_1|.
inline KolmogorovBound kolmogorov_weighted_bound(const DistributionSpec& spec, std::uint64_t K) {
  if (K == 0) throw std::invalid_argument("kolmogorov_weighted_bound needs K >= 1");
  const double m1 = moment_abs(spec, 1.0);
  if (!std::isfinite(m1))
    throw std::domain_error("kolmogorov_weighted_bound requires a finite first absolute moment");
  KolmogorovBound out;
  out.bound = 4.0 * m1;
  detail::KahanSum acc;
  std::uint64_t decade = 1;
  for (std::uint64_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    acc.add(truncated_second_moment_at(spec, k, kd) / (kd * kd));
    if (k == decade) {
      out.checkpoints.emplace_back(k, acc.sum);
      if (decade > K / 10) decade = K;  // avoid overflow past the last decade
      decade *= 10;
    }
  }
  if (out.checkpoints.empty() || out.checkpoints.back().first != K)
    out.checkpoints.emplace_back(K, acc.sum);
  out.lhs = acc.sum;
  return out;
}

struct StoicaBounds {
  double p = 0.0;
  double r = 0.0;
  std::vector<std::pair<std::uint64_t, double>> curve1;  // truncated second moments
  std::vector<std::pair<std::uint64_t, double>> curve2;  // tail first moments
};

// Partial sums of the two dominating series
//   sum_n n^{(p-2)/r - 2} sum_{k <= n} E[X_k^2 1{|X_k| <= n^{1/r}}]
//   sum_n n^{(p-1)/r - 2} sum_{k <= n} E[|X_k| 1{|X_k| > n^{1/r}}]
// recorded at decade checkpoints. Identically distributed specs collapse
// the inner sum to n times one moment; per-index families pay O(N^2) and
// are capped.
inline StoicaBounds stoica_bounds(const DistributionSpec& spec, double p, double r,
                                  std::uint64_t N) {
  if (!(p > 1.0 && p < 2.0)) throw std::domain_error("stoica_bounds requires 1 < p < 2");
  if (!(r >= 1.0 && r <= p)) throw std::domain_error("stoica_bounds requires 1 <= r <= p");
  if (N == 0) throw std::invalid_argument("stoica_bounds needs N >= 1");
  const bool per_index = spec.kind == DistKind::ScaledFamily;
  if (per_index && N > 20000)
    throw std::invalid_argument("stoica_bounds caps per-index laws at N = 20000");
  const double e1 = (p - 2.0) / r - 2.0;
  const double e2 = (p - 1.0) / r - 2.0;
  StoicaBounds out;
  out.p = p;
  out.r = r;
  detail::KahanSum s1, s2;
  std::uint64_t decade = 1;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    const double cut = std::pow(nd, 1.0 / r);
    double inner1, inner2;
    if (per_index) {
      detail::KahanSum i1, i2;
      for (std::uint64_t k = 1; k <= n; ++k) {
        i1.add(truncated_second_moment_at(spec, k, cut));
        i2.add(tail_first_moment_at(spec, k, cut));
      }
      inner1 = i1.sum;
      inner2 = i2.sum;
    } else {
      inner1 = nd * truncated_second_moment(spec, cut);
      inner2 = nd * tail_first_moment(spec, cut);
    }
    s1.add(std::pow(nd, e1) * inner1);
    s2.add(std::pow(nd, e2) * inner2);
    if (n == decade) {
      out.curve1.emplace_back(n, s1.sum);
      out.curve2.emplace_back(n, s2.sum);
      if (decade > N / 10) decade = N;
      decade *= 10;
    }
  }
  if (out.curve1.empty() || out.curve1.back().first != N) {
    out.curve1.emplace_back(N, s1.sum);
    out.curve2.emplace_back(N, s2.sum);
  }
  return out;
}

struct HuntYoungResult {
  double integral = 0.0;  // integral of max_{k <= n} |S'_k(t)|^2 dt
  double rhs = 0.0;       // sum of the truncated squares
  double ratio = 0.0;     // NaN when rhs vanishes
};

// Maximal-function energy ratio on the uniform M-node grid over [-pi, pi).
// The grid integrates trigonometric polynomials of degree < M/2 exactly, so
// with M >= 2n the endpoint energy identity pins the integral scale.
inline HuntYoungResult hunt_young_ratio(std::span<const double> xs, double c, std::uint64_t n,
                                        std::uint64_t M) {
  if (n != xs.size()) throw std::invalid_argument("hunt_young_ratio: n must equal xs.size()");
  if (n == 0) throw std::invalid_argument("hunt_young_ratio needs n >= 1");
  if (M < 2 * n) throw std::invalid_argument("hunt_young_ratio needs M >= 2n");
  const SplitSequence split = split_at_threshold(xs, c);
  detail::KahanSum rhs;
  for (double v : split.low) rhs.add(v * v);
  detail::KahanSum integral;
  for (std::uint64_t j = 0; j < M; ++j) {
    const double tj = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(M);
    PhaseStream ph(std::fabs(tj));
    double sr = 0.0, si = 0.0, pm2 = 0.0;
    for (std::uint64_t k = 1; k <= n; ++k) {
      const std::complex<double> e = ph.next();
      const double x = split.low[k - 1];
      sr += e.real() * x;
      si += e.imag() * x;
      const double m2 = sr * sr + si * si;
      if (m2 > pm2) pm2 = m2;
    }
    integral.add(pm2);
  }
  HuntYoungResult out;
  out.integral = integral.sum * (2.0 * kPi / static_cast<double>(M));
  out.rhs = rhs.sum;
  out.ratio = out.rhs > 0.0 ? out.integral / out.rhs : std::numeric_limits<double>::quiet_NaN();
  return out;
}

// (2 pi / M) sum_j |S_n(t_j)|^2 on the same grid; equals 2 pi sum x_k^2 to
// rounding once M >= 2n.
inline double quadrature_energy(std::span<const double> xs, std::uint64_t M) {
  if (xs.empty()) throw std::invalid_argument("quadrature_energy needs n >= 1");
  if (M == 0) throw std::invalid_argument("quadrature_energy needs M >= 1");
  detail::KahanSum acc;
  for (std::uint64_t j = 0; j < M; ++j) {
    const double tj = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(M);
    PhaseStream ph(std::fabs(tj));
    double sr = 0.0, si = 0.0;
    for (double x : xs) {
      const std::complex<double> e = ph.next();
      sr += e.real() * x;
      si += e.imag() * x;
    }
    acc.add(sr * sr + si * si);
  }
  return acc.sum * (2.0 * kPi / static_cast<double>(M));
}

// |S_k|/k at the scan checkpoints; the Kronecker-lemma view of a scan.
inline std::vector<std::pair<std::uint64_t, double>> kronecker_average(
    const PrefixScanResult& scan) {
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(scan.checkpoints.size());
  for (const auto& [k, mag] : scan.checkpoints)
    out.emplace_back(k, mag / static_cast<double>(k));
  return out;
}

struct LlnPoint {
  std::uint64_t n = 0;
  double q10_over_n = 0.0;
  double median_over_n = 0.0;
  double q90_over_n = 0.0;
  double q10_over_np = 0.0;
  double median_over_np = 0.0;
  double q90_over_np = 0.0;
};

struct LlnTrajectory {
  double t = 0.0;
  double p = 0.0;
  std::vector<LlnPoint> points;
  std::vector<std::vector<double>> abs_sums;  // [grid point][seed] raw |S_n|
};

namespace detail {

inline double sorted_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  const double idx = q * static_cast<double>(m - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, m - 1);
  const double frac = idx - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

// Quantile bands of |S_n|/n and |S_n|/n^{1/p} across independent seeds,
// one scan per seed up to the last grid point.
inline LlnTrajectory lln_trajectory(const DistributionSpec& spec, double t,
                                    const std::vector<std::uint64_t>& n_grid, std::uint64_t seeds,
                                    double p, std::uint64_t master_seed,
                                    std::uint64_t seed_base = 0, unsigned threads = 1) {
  validate_t(t);
  if (n_grid.empty()) throw std::invalid_argument("lln_trajectory needs a nonempty grid");
  for (std::size_t j = 1; j < n_grid.size(); ++j)
    if (n_grid[j] <= n_grid[j - 1])
      throw std::invalid_argument("lln_trajectory grid must be strictly increasing");
  if (seeds < 30) throw std::invalid_argument("lln_trajectory needs at least 30 seeds");
  if (!(p > 1.0 && p < 2.0)) throw std::domain_error("lln_trajectory requires 1 < p < 2");
  validate_sample_length(spec, n_grid.back());

  LlnTrajectory traj;
  traj.t = t;
  traj.p = p;
  traj.abs_sums.assign(n_grid.size(), std::vector<double>(seeds, 0.0));
  const std::uint64_t n_max = n_grid.back();
  parallel_for(seeds, threads, [&](std::uint64_t i) {
    Sampler smp(spec, derive_seed(master_seed, seed_base + i));
    PhaseStream ph(std::fabs(t));
    double sr = 0.0, si = 0.0;
    std::size_t gi = 0;
    for (std::uint64_t k = 1; k <= n_max; ++k) {
      const double x = smp.next();
      const std::complex<double> e = ph.next();
      sr += e.real() * x;
      si += e.imag() * x;
      if (gi < n_grid.size() && n_grid[gi] == k) {
        traj.abs_sums[gi][i] = std::sqrt(sr * sr + si * si);
        ++gi;
      }
    }
  });
  traj.points.reserve(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    std::vector<double> sorted = traj.abs_sums[g];
    std::sort(sorted.begin(), sorted.end());
    const double nd = static_cast<double>(n_grid[g]);
    const double np = std::pow(nd, 1.0 / p);
    LlnPoint pt;
    pt.n = n_grid[g];
    pt.q10_over_n = detail::sorted_quantile(sorted, 0.1) / nd;
    pt.median_over_n = detail::sorted_quantile(sorted, 0.5) / nd;
    pt.q90_over_n = detail::sorted_quantile(sorted, 0.9) / nd;
    pt.q10_over_np = detail::sorted_quantile(sorted, 0.1) / np;
    pt.median_over_np = detail::sorted_quantile(sorted, 0.5) / np;
    pt.q90_over_np = detail::sorted_quantile(sorted, 0.9) / np;
    traj.points.push_back(pt);
  }
  return traj;
}

}  // namespace dftlab

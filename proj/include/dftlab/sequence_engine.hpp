#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dftlab {

inline constexpr double kPi = std::numbers::pi;

inline void validate_t(double t) {
  if (!(t >= -kPi && t < kPi)) throw std::domain_error("t must lie in [-pi, pi)");
}

namespace detail {

constexpr std::uint64_t kRenormEvery = 1024;
constexpr std::uint64_t kResyncEvery = std::uint64_t{1} << 20;

inline double nudge_ulps(double v, int ulps) {
  while (ulps > 0) {
    v = std::nextafter(v, std::numeric_limits<double>::infinity());
    --ulps;
  }
  while (ulps < 0) {
    v = std::nextafter(v, -std::numeric_limits<double>::infinity());
    ++ulps;
  }
  return v;
}

}  // namespace detail

// Emits e^{ikt} for k = 1, 2, ... by repeated rotation. The rotation
// constant is the representable pair near (cos t, sin t) whose angle is
// closest to t, the modulus is renormalized every 1024 steps, and the
// phase is resynced against a long double anchor every 2^20 steps, which
// keeps the emitted values within about 1e-11 of the ideal ones over
// 10^7 steps.
class PhaseStream {
 public:
  explicit PhaseStream(double t) : t_(t) {
    if (!(t >= -kPi && t <= kPi)) throw std::domain_error("phase stream needs |t| <= pi");
    const double c0 = std::cos(t);
    const double s0 = std::sin(t);
    const auto angle_err = [t](double c, double s) {
      return fabsl(atan2l(static_cast<long double>(s), static_cast<long double>(c)) -
                   static_cast<long double>(t));
    };
    cr_ = c0;
    ci_ = s0;
    long double best = angle_err(c0, s0);
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        if (i == 0 && j == 0) continue;
        const double c = detail::nudge_ulps(c0, i);
        const double s = detail::nudge_ulps(s0, j);
        const long double err = angle_err(c, s);
        if (err < best) {
          best = err;
          cr_ = c;
          ci_ = s;
        }
      }
    }
  }

  std::complex<double> next() {
    const double r = zr_ * cr_ - zi_ * ci_;
    const double i = zr_ * ci_ + zi_ * cr_;
    zr_ = r;
    zi_ = i;
    ++k_;
    if (k_ % detail::kResyncEvery == 0) {
      resync();
    } else if (k_ % detail::kRenormEvery == 0) {
      const double a = std::sqrt(zr_ * zr_ + zi_ * zi_);
      zr_ /= a;
      zi_ /= a;
    }
    return {zr_, zi_};
  }

  std::uint64_t index() const { return k_; }

 private:
  void resync() {
    const long double tau = 2.0L * std::numbers::pi_v<long double>;
    const long double th = fmodl(static_cast<long double>(k_) * static_cast<long double>(t_), tau);
    zr_ = static_cast<double>(cosl(th));
    zi_ = static_cast<double>(sinl(th));
  }

  double t_;
  double cr_ = 1.0, ci_ = 0.0;
  double zr_ = 1.0, zi_ = 0.0;
  std::uint64_t k_ = 0;
};

// Roughly `target` log-spaced indices in [1, n], always including 1 and n;
// every index when n <= target.
inline std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t n, std::size_t target = 64) {
  if (n == 0) throw std::invalid_argument("geometric_checkpoints: n must be positive");
  std::vector<std::uint64_t> ks;
  if (n <= target) {
    for (std::uint64_t k = 1; k <= n; ++k) ks.push_back(k);
    return ks;
  }
  const double ln = std::log(static_cast<double>(n));
  for (std::size_t i = 0; i < target; ++i) {
    const double x = std::exp(ln * static_cast<double>(i) / static_cast<double>(target - 1));
    std::uint64_t k = static_cast<std::uint64_t>(std::llround(x));
    if (k < 1) k = 1;
    if (k > n) k = n;
    if (ks.empty() || k > ks.back()) ks.push_back(k);
  }
  if (ks.back() != n) ks.push_back(n);
  return ks;
}

struct PrefixScanResult {
  double t = 0.0;
  std::uint64_t n = 0;
  std::complex<double> final_sum{0.0, 0.0};
  double prefix_max = 0.0;
  std::vector<std::pair<std::uint64_t, double>> checkpoints;  // (k, |S_k|)
};

// Single pass over X_1..X_n accumulating S_k = sum e^{ikt} X_k. Negative t
// runs the identical arithmetic at |t| and conjugates the final sum, so the
// magnitude path is bit-identical for t and -t.
template <typename Source>
PrefixScanResult scan_source(Source&& draw, std::uint64_t n, double t) {
  validate_t(t);
  if (n == 0) throw std::invalid_argument("scan needs n >= 1");
  PhaseStream ph(std::fabs(t));
  const std::vector<std::uint64_t> grid = geometric_checkpoints(n);
  PrefixScanResult out;
  out.t = t;
  out.n = n;
  out.checkpoints.reserve(grid.size());
  double sr = 0.0, si = 0.0, pm2 = 0.0;
  std::size_t gi = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double x = draw();
    const std::complex<double> e = ph.next();
    sr += e.real() * x;
    si += e.imag() * x;
    const double m2 = sr * sr + si * si;
    if (m2 > pm2) pm2 = m2;
    if (gi < grid.size() && grid[gi] == k) {
      out.checkpoints.emplace_back(k, std::sqrt(m2));
      ++gi;
    }
  }
  out.final_sum = t < 0.0 ? std::complex<double>(sr, -si) : std::complex<double>(sr, si);
  out.prefix_max = std::sqrt(pm2);
  return out;
}

inline PrefixScanResult dft_prefix_scan(std::span<const double> xs, double t) {
  std::size_t i = 0;
  return scan_source([&] { return xs[i++]; }, xs.size(), t);
}

// max_{k <= n} |S_k| without checkpoint bookkeeping; same arithmetic as
// scan_source.
template <typename Source>
double prefix_max_magnitude(Source&& draw, std::uint64_t n, double t) {
  if (n == 0) throw std::invalid_argument("scan needs n >= 1");
  PhaseStream ph(std::fabs(t));
  double sr = 0.0, si = 0.0, pm2 = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double x = draw();
    const std::complex<double> e = ph.next();
    sr += e.real() * x;
    si += e.imag() * x;
    const double m2 = sr * sr + si * si;
    if (m2 > pm2) pm2 = m2;
  }
  return std::sqrt(pm2);
}

struct TruncationResult {
  std::vector<double> ys;
  std::uint64_t mismatches = 0;  // indices with |x_k| > k
};

// Y_k = X_k 1{|X_k| <= k}, indices 1-based.
inline TruncationResult truncate_at_index(std::span<const double> xs) {
  TruncationResult r;
  r.ys.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (std::fabs(x) <= static_cast<double>(i + 1)) {
      r.ys.push_back(x);
    } else {
      r.ys.push_back(0.0);
      ++r.mismatches;
    }
  }
  return r;
}

struct SplitSequence {
  std::vector<double> low;   // entries with |x_k| <= c, zeros elsewhere
  std::vector<double> high;  // the complement
  double threshold = 0.0;
};

inline SplitSequence split_at_threshold(std::span<const double> xs, double c) {
  if (!(c >= 0.0)) throw std::domain_error("split threshold must be nonnegative");
  SplitSequence s;
  s.threshold = c;
  s.low.reserve(xs.size());
  s.high.reserve(xs.size());
  for (double x : xs) {
    if (std::fabs(x) <= c) {
      s.low.push_back(x);
      s.high.push_back(0.0);
    } else {
      s.low.push_back(0.0);
      s.high.push_back(x);
    }
  }
  return s;
}

struct WeightedSeriesResult {
  double t = 0.0;
  std::uint64_t n = 0;
  std::complex<double> final_sum{0.0, 0.0};
  std::vector<std::pair<std::uint64_t, double>> checkpoints;            // (k, |T_k|)
  std::vector<std::pair<std::uint64_t, std::complex<double>>> partials;  // T_k at the same k
};

// T_k = sum_{j <= k} e^{ijt} y_j / j, recorded at record_at (geometric
// checkpoints when empty).
inline WeightedSeriesResult weighted_fourier_series(std::span<const double> ys, double t,
                                                    std::vector<std::uint64_t> record_at = {}) {
  validate_t(t);
  const std::uint64_t n = ys.size();
  if (n == 0) throw std::invalid_argument("weighted_fourier_series: empty input");
  if (record_at.empty()) {
    record_at = geometric_checkpoints(n);
  } else {
    for (std::size_t i = 0; i < record_at.size(); ++i) {
      if (record_at[i] < 1 || record_at[i] > n || (i > 0 && record_at[i] <= record_at[i - 1]))
        throw std::invalid_argument("record_at must be strictly increasing within [1, n]");
    }
  }
  PhaseStream ph(std::fabs(t));
  WeightedSeriesResult out;
  out.t = t;
  out.n = n;
  out.checkpoints.reserve(record_at.size());
  out.partials.reserve(record_at.size());
  double sr = 0.0, si = 0.0;
  std::size_t gi = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double w = ys[k - 1] / static_cast<double>(k);
    const std::complex<double> e = ph.next();
    sr += e.real() * w;
    si += e.imag() * w;
    if (gi < record_at.size() && record_at[gi] == k) {
      out.checkpoints.emplace_back(k, std::sqrt(sr * sr + si * si));
      out.partials.emplace_back(k, t < 0.0 ? std::complex<double>(sr, -si)
                                           : std::complex<double>(sr, si));
      ++gi;
    }
  }
  out.final_sum = t < 0.0 ? std::complex<double>(sr, -si) : std::complex<double>(sr, si);
  return out;
}

}  // namespace dftlab

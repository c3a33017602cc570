#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dftlab {

enum class DistKind { SymmetricPareto, Rademacher, ScaledFamily, PairwiseRademacher };

// Scale rule for ScaledFamily: InvLog means c_k = 1 / (1 + ln k).
enum class ScaleRule { InvLog };

struct DistributionSpec {
  DistKind kind = DistKind::Rademacher;
  double alpha = 0.0;  // SymmetricPareto tail exponent
  int m = 0;           // PairwiseRademacher lattice dimension
  ScaleRule scale_rule = ScaleRule::InvLog;
  std::shared_ptr<const DistributionSpec> base;  // ScaledFamily component law
  std::string label;
};

namespace detail {
inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace detail

inline DistributionSpec symmetric_pareto(double alpha, std::string label = {}) {
  if (!(alpha > 0.0)) throw std::invalid_argument("symmetric_pareto: alpha must be positive");
  DistributionSpec s;
  s.kind = DistKind::SymmetricPareto;
  s.alpha = alpha;
  s.label = label.empty() ? "pareto(" + detail::fmt_g(alpha) + ")" : std::move(label);
  return s;
}

inline DistributionSpec rademacher(std::string label = {}) {
  DistributionSpec s;
  s.kind = DistKind::Rademacher;
  s.label = label.empty() ? "rademacher" : std::move(label);
  return s;
}

inline DistributionSpec pairwise_rademacher(int m, std::string label = {}) {
  if (m < 1 || m > 40)
    throw std::invalid_argument("pairwise_rademacher: m must lie in [1, 40]");
  DistributionSpec s;
  s.kind = DistKind::PairwiseRademacher;
  s.m = m;
  s.label = label.empty() ? "pairwise(" + std::to_string(m) + ")" : std::move(label);
  return s;
}

inline DistributionSpec scaled_family(DistributionSpec base, ScaleRule rule = ScaleRule::InvLog,
                                      std::string label = {}) {
  if (base.kind == DistKind::ScaledFamily || base.kind == DistKind::PairwiseRademacher)
    throw std::invalid_argument("scaled_family: base must be symmetric_pareto or rademacher");
  DistributionSpec s;
  s.kind = DistKind::ScaledFamily;
  s.scale_rule = rule;
  std::string base_label = base.label;
  s.base = std::make_shared<const DistributionSpec>(std::move(base));
  s.label = label.empty() ? "scaled[" + base_label + "]" : std::move(label);
  return s;
}

inline double scale_at(const DistributionSpec& spec, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("scale_at: indices start at 1");
  if (spec.kind != DistKind::ScaledFamily) return 1.0;
  return 1.0 / (1.0 + std::log(static_cast<double>(k)));
}

inline std::uint64_t max_sample_length(const DistributionSpec& spec) {
  if (spec.kind == DistKind::PairwiseRademacher)
    return (std::uint64_t{1} << spec.m) - 1;
  return std::numeric_limits<std::uint64_t>::max();
}

inline void validate_sample_length(const DistributionSpec& spec, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("sample length must be positive");
  if (n > max_sample_length(spec))
    throw std::length_error("pairwise rademacher sequence has only 2^m - 1 entries");
}

// Streams X_1, X_2, ... for a spec. One mt19937_64 word per draw; the top
// 53 bits make the (0,1) uniform and bit 0 of the same word carries the sign.
class Sampler {
 public:
  Sampler(DistributionSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(seed) {
    DistKind inner = spec_.kind;
    if (spec_.kind == DistKind::ScaledFamily) {
      if (!spec_.base) throw std::invalid_argument("scaled_family: missing base law");
      inner = spec_.base->kind;
      if (inner == DistKind::ScaledFamily || inner == DistKind::PairwiseRademacher)
        throw std::invalid_argument("scaled_family: base must be symmetric_pareto or rademacher");
    }
    if (inner == DistKind::SymmetricPareto) {
      const double alpha = spec_.kind == DistKind::ScaledFamily ? spec_.base->alpha : spec_.alpha;
      if (!(alpha > 0.0)) throw std::invalid_argument("symmetric_pareto: alpha must be positive");
      inv_alpha_ = 1.0 / alpha;
    }
    if (spec_.kind == DistKind::PairwiseRademacher) {
      if (spec_.m < 1 || spec_.m > 40)
        throw std::invalid_argument("pairwise_rademacher: m must lie in [1, 40]");
      limit_ = (std::uint64_t{1} << spec_.m) - 1;
      negmask_ = rng_() & limit_;
    }
    base_kind_ = inner;
  }

  double next() {
    ++k_;
    switch (spec_.kind) {
      case DistKind::SymmetricPareto:
        return pareto_draw();
      case DistKind::Rademacher:
        return sign_draw();
      case DistKind::PairwiseRademacher:
        if (k_ > limit_)
          throw std::length_error("pairwise rademacher sequence has only 2^m - 1 entries");
        return (std::popcount(k_ & negmask_) & 1) ? -1.0 : 1.0;
      case DistKind::ScaledFamily: {
        const double b = base_kind_ == DistKind::SymmetricPareto ? pareto_draw() : sign_draw();
        return b * scale_at(spec_, k_);
      }
    }
    return 0.0;
  }

  std::uint64_t index() const { return k_; }

 private:
  double pareto_draw() {
    const std::uint64_t raw = rng_();
    const double u = (static_cast<double>(raw >> 11) + 0.5) * 0x1p-53;
    const double mag = std::pow(u, -inv_alpha_);
    return (raw & 1u) ? -mag : mag;
  }
  double sign_draw() { return (rng_() & 1u) ? -1.0 : 1.0; }

  DistributionSpec spec_;
  std::mt19937_64 rng_;
  std::uint64_t k_ = 0;
  std::uint64_t limit_ = 0;
  std::uint64_t negmask_ = 0;
  double inv_alpha_ = 0.0;
  DistKind base_kind_ = DistKind::Rademacher;
};

inline std::vector<double> sample(const DistributionSpec& spec, std::uint64_t seed,
                                  std::uint64_t n) {
  validate_sample_length(spec, n);
  Sampler s(spec, seed);
  std::vector<double> xs;
  xs.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) xs.push_back(s.next());
  return xs;
}

// First 2^m - 1 entries of the pairwise independent sign sequence.
inline std::vector<double> pairwise_independent_rademacher(int m, std::uint64_t seed) {
  const DistributionSpec spec = pairwise_rademacher(m);
  return sample(spec, seed, max_sample_length(spec));
}

// P(|X_1| > x).
inline double tail_prob(const DistributionSpec& spec, double x) {
  if (!(x >= 0.0)) throw std::domain_error("tail_prob: x must be nonnegative");
  switch (spec.kind) {
    case DistKind::SymmetricPareto:
      return x <= 1.0 ? 1.0 : std::pow(x, -spec.alpha);
    case DistKind::Rademacher:
    case DistKind::PairwiseRademacher:
      return x < 1.0 ? 1.0 : 0.0;
    case DistKind::ScaledFamily:
      throw std::invalid_argument("tail_prob: scaled family is per index, use tail_prob_at");
  }
  return 0.0;
}

inline double tail_prob_at(const DistributionSpec& spec, std::uint64_t k, double x) {
  if (spec.kind != DistKind::ScaledFamily) return tail_prob(spec, x);
  return tail_prob(*spec.base, x / scale_at(spec, k));
}

// E|X_1|^q, +inf when the moment diverges. For ScaledFamily this is the
// lead (k = 1) law, whose scale is 1.
inline double moment_abs(const DistributionSpec& spec, double q) {
  if (!(q >= 0.0)) throw std::domain_error("moment_abs: q must be nonnegative");
  switch (spec.kind) {
    case DistKind::SymmetricPareto:
      return q < spec.alpha ? spec.alpha / (spec.alpha - q)
                            : std::numeric_limits<double>::infinity();
    case DistKind::Rademacher:
    case DistKind::PairwiseRademacher:
      return 1.0;
    case DistKind::ScaledFamily:
      return moment_abs(*spec.base, q);
  }
  return 0.0;
}

// E[X_1^2 1{|X_1| <= c}].
inline double truncated_second_moment(const DistributionSpec& spec, double c) {
  if (!(c >= 0.0)) throw std::domain_error("truncated_second_moment: c must be nonnegative");
  switch (spec.kind) {
    case DistKind::SymmetricPareto: {
      if (c < 1.0) return 0.0;
      if (spec.alpha == 2.0) return 2.0 * std::log(c);
      return spec.alpha * (std::pow(c, 2.0 - spec.alpha) - 1.0) / (2.0 - spec.alpha);
    }
    case DistKind::Rademacher:
    case DistKind::PairwiseRademacher:
      return c >= 1.0 ? 1.0 : 0.0;
    case DistKind::ScaledFamily:
      return truncated_second_moment(*spec.base, c);
  }
  return 0.0;
}

inline double truncated_second_moment_at(const DistributionSpec& spec, std::uint64_t k, double c) {
  if (spec.kind != DistKind::ScaledFamily) return truncated_second_moment(spec, c);
  const double s = scale_at(spec, k);
  return s * s * truncated_second_moment(*spec.base, c / s);
}

// E[|X_1| 1{|X_1| > c}].
inline double tail_first_moment(const DistributionSpec& spec, double c) {
  if (!(c >= 0.0)) throw std::domain_error("tail_first_moment: c must be nonnegative");
  switch (spec.kind) {
    case DistKind::SymmetricPareto: {
      if (spec.alpha <= 1.0) return std::numeric_limits<double>::infinity();
      return spec.alpha / (spec.alpha - 1.0) * std::pow(std::max(c, 1.0), 1.0 - spec.alpha);
    }
    case DistKind::Rademacher:
    case DistKind::PairwiseRademacher:
      return c < 1.0 ? 1.0 : 0.0;
    case DistKind::ScaledFamily:
      return tail_first_moment(*spec.base, c);
  }
  return 0.0;
}

inline double tail_first_moment_at(const DistributionSpec& spec, std::uint64_t k, double c) {
  if (spec.kind != DistKind::ScaledFamily) return tail_first_moment(spec, c);
  const double s = scale_at(spec, k);
  return s * tail_first_moment(*spec.base, c / s);
}

struct MomentProfile {
  double p = 0.0;
  double r = 0.0;
  double abs_moment_p = 0.0;
  double abs_moment_1 = 0.0;
};

inline MomentProfile make_moment_profile(const DistributionSpec& spec, double p, double r) {
  if (!(p > 1.0 && p < 2.0)) throw std::domain_error("moment profile requires 1 < p < 2");
  if (!(r >= 1.0 && r <= p)) throw std::domain_error("moment profile requires 1 <= r <= p");
  return {p, r, moment_abs(spec, p), moment_abs(spec, 1.0)};
}

}  // namespace dftlab

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dftlab/distributions.hpp"
#include "dftlab/sequence_engine.hpp"

namespace dftlab {

// Validation failure with the offending field path, e.g. "t_mode.values[2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class TModeKind { FixedGrid, RandomDraws };

struct TMode {
  TModeKind kind = TModeKind::FixedGrid;
  std::vector<double> values;  // FixedGrid
  std::uint64_t count = 0;     // RandomDraws
  std::uint64_t seed = 0;      // RandomDraws
};

struct NGridSpec {
  std::uint64_t n0 = 0;
  double gamma = 0.0;
  std::uint64_t points = 0;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = {"oracle",   "lln",     "rates", "dyadic",
                                                 "carleson", "maximal", "bounds"};
  return names;
}

struct RunConfig {
  DistributionSpec distribution;
  double p = 0.0;
  double r = 0.0;
  double epsilon = 0.0;
  TMode t_mode;
  NGridSpec n_grid;
  std::uint64_t reps = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::string> suites;  // deduplicated, canonical order
  std::string output_dir;           // optional; empty means caller decides
};

// n_j = ceil(n0 * gamma^j), j = 0 .. points-1, with the geometric value
// carried in double so the grid matches what the config promised.
inline std::vector<std::uint64_t> make_n_grid(const NGridSpec& g) {
  if (g.n0 < 1) throw ConfigError("n_grid.n0", "must be at least 1");
  if (!(g.gamma > 1.0)) throw ConfigError("n_grid.gamma", "must exceed 1");
  if (g.points < 1 || g.points > 4096) throw ConfigError("n_grid.points", "must lie in [1, 4096]");
  std::vector<std::uint64_t> grid;
  grid.reserve(g.points);
  double v = static_cast<double>(g.n0);
  for (std::uint64_t j = 0; j < g.points; ++j) {
    const double c = std::ceil(v);
    if (c > 9e15) throw ConfigError("n_grid", "grid exceeds the supported range");
    const auto n = static_cast<std::uint64_t>(c);
    if (!grid.empty() && n <= grid.back())
      throw ConfigError("n_grid.gamma", "grid points collide; increase gamma");
    grid.push_back(n);
    v *= g.gamma;
  }
  return grid;
}

// FixedGrid passes through; RandomDraws maps mt19937_64 words to
// uniform [-pi, pi) via the top 53 bits.
inline std::vector<double> resolve_t_values(const TMode& tm) {
  if (tm.kind == TModeKind::FixedGrid) return tm.values;
  std::vector<double> ts;
  ts.reserve(tm.count);
  std::mt19937_64 rng(tm.seed);
  for (std::uint64_t i = 0; i < tm.count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    ts.push_back(-kPi + 2.0 * kPi * u);
  }
  return ts;
}

namespace detail {

using nlohmann::json;

inline std::string join_field(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown_keys(const json& j, const std::string& path,
                                std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(join_field(path, it.key()), "unknown field");
  }
}

inline const json& require_field(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join_field(path, key), "missing required field");
  return *it;
}

inline double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

inline std::uint64_t get_uint(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  // programmatic configs carry int literals as signed values
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError(field, "expected a nonnegative integer");
}

inline std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

inline DistributionSpec parse_distribution(const json& j, const std::string& path,
                                           bool allow_scaled) {
  require_object(j, path);
  const std::string kind = get_string(require_field(j, path, "kind"), join_field(path, "kind"));
  if (kind == "symmetric_pareto") {
    reject_unknown_keys(j, path, {"kind", "alpha"});
    const double alpha =
        get_number(require_field(j, path, "alpha"), join_field(path, "alpha"));
    if (!(alpha > 0.0)) throw ConfigError(join_field(path, "alpha"), "must be positive");
    return symmetric_pareto(alpha);
  }
  if (kind == "rademacher") {
    reject_unknown_keys(j, path, {"kind"});
    return rademacher();
  }
  if (kind == "pairwise_rademacher") {
    reject_unknown_keys(j, path, {"kind", "m"});
    const std::uint64_t m = get_uint(require_field(j, path, "m"), join_field(path, "m"));
    if (m < 1 || m > 40) throw ConfigError(join_field(path, "m"), "must lie in [1, 40]");
    return pairwise_rademacher(static_cast<int>(m));
  }
  if (kind == "scaled_family") {
    if (!allow_scaled)
      throw ConfigError(join_field(path, "kind"), "scaled_family cannot nest");
    reject_unknown_keys(j, path, {"kind", "scale_rule", "base"});
    const std::string rule =
        get_string(require_field(j, path, "scale_rule"), join_field(path, "scale_rule"));
    if (rule != "inv_log")
      throw ConfigError(join_field(path, "scale_rule"), "unknown scale rule '" + rule + "'");
    DistributionSpec base =
        parse_distribution(require_field(j, path, "base"), join_field(path, "base"), false);
    if (base.kind == DistKind::PairwiseRademacher)
      throw ConfigError(join_field(path, "base"), "must be symmetric_pareto or rademacher");
    return scaled_family(std::move(base), ScaleRule::InvLog);
  }
  throw ConfigError(join_field(path, "kind"), "unknown distribution kind '" + kind + "'");
}

inline json distribution_to_json(const DistributionSpec& spec) {
  json j;
  switch (spec.kind) {
    case DistKind::SymmetricPareto:
      j["kind"] = "symmetric_pareto";
      j["alpha"] = spec.alpha;
      break;
    case DistKind::Rademacher:
      j["kind"] = "rademacher";
      break;
    case DistKind::PairwiseRademacher:
      j["kind"] = "pairwise_rademacher";
      j["m"] = spec.m;
      break;
    case DistKind::ScaledFamily:
      j["kind"] = "scaled_family";
      j["scale_rule"] = "inv_log";
      j["base"] = distribution_to_json(*spec.base);
      break;
  }
  return j;
}

inline TMode parse_t_mode(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string mode = get_string(require_field(j, path, "mode"), join_field(path, "mode"));
  TMode tm;
  if (mode == "fixed_grid") {
    reject_unknown_keys(j, path, {"mode", "values"});
    const json& vals = require_field(j, path, "values");
    if (!vals.is_array()) throw ConfigError(join_field(path, "values"), "expected an array");
    if (vals.empty()) throw ConfigError(join_field(path, "values"), "must not be empty");
    tm.kind = TModeKind::FixedGrid;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::string field = join_field(path, "values[" + std::to_string(i) + "]");
      const double t = get_number(vals[i], field);
      if (!(t >= -kPi && t < kPi)) throw ConfigError(field, "must lie in [-pi, pi)");
      tm.values.push_back(t);
    }
    return tm;
  }
  if (mode == "random_draws") {
    reject_unknown_keys(j, path, {"mode", "count", "seed"});
    tm.kind = TModeKind::RandomDraws;
    tm.count = get_uint(require_field(j, path, "count"), join_field(path, "count"));
    if (tm.count < 1) throw ConfigError(join_field(path, "count"), "must be at least 1");
    tm.seed = get_uint(require_field(j, path, "seed"), join_field(path, "seed"));
    return tm;
  }
  throw ConfigError(join_field(path, "mode"), "unknown t mode '" + mode + "'");
}

inline NGridSpec parse_n_grid(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"n0", "gamma", "points"});
  NGridSpec g;
  g.n0 = get_uint(require_field(j, path, "n0"), join_field(path, "n0"));
  g.gamma = get_number(require_field(j, path, "gamma"), join_field(path, "gamma"));
  g.points = get_uint(require_field(j, path, "points"), join_field(path, "points"));
  return g;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  using detail::get_number;
  using detail::get_string;
  using detail::get_uint;
  using detail::require_field;

  detail::require_object(j, "config");
  detail::reject_unknown_keys(j, "", {"distribution", "p", "r", "epsilon", "t_mode", "n_grid",
                                      "reps", "master_seed", "suites", "output_dir"});
  RunConfig cfg;
  cfg.distribution = detail::parse_distribution(require_field(j, "", "distribution"),
                                                "distribution", true);
  cfg.p = get_number(require_field(j, "", "p"), "p");
  if (!(cfg.p > 1.0 && cfg.p < 2.0)) throw ConfigError("p", "must lie in (1, 2)");
  cfg.r = get_number(require_field(j, "", "r"), "r");
  if (!(cfg.r >= 1.0 && cfg.r <= cfg.p)) throw ConfigError("r", "must lie in [1, p]");
  cfg.epsilon = get_number(require_field(j, "", "epsilon"), "epsilon");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
  cfg.t_mode = detail::parse_t_mode(require_field(j, "", "t_mode"), "t_mode");
  cfg.n_grid = detail::parse_n_grid(require_field(j, "", "n_grid"), "n_grid");
  cfg.reps = get_uint(require_field(j, "", "reps"), "reps");
  if (cfg.reps < 1) throw ConfigError("reps", "must be at least 1");
  cfg.master_seed = get_uint(require_field(j, "", "master_seed"), "master_seed");

  const nlohmann::json& suites = require_field(j, "", "suites");
  if (!suites.is_array()) throw ConfigError("suites", "expected an array");
  std::vector<std::string> requested;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const std::string field = "suites[" + std::to_string(i) + "]";
    const std::string name = get_string(suites[i], field);
    bool ok = false;
    for (const auto& k : known_suites())
      if (k == name) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(field, "unknown suite '" + name + "'");
    requested.push_back(name);
  }
  for (const auto& k : known_suites()) {
    for (const auto& name : requested)
      if (name == k) {
        cfg.suites.push_back(k);
        break;
      }
  }

  if (const auto it = j.find("output_dir"); it != j.end())
    cfg.output_dir = get_string(*it, "output_dir");

  const auto has = [&](const char* s) {
    for (const auto& name : cfg.suites)
      if (name == s) return true;
    return false;
  };

  const std::vector<std::uint64_t> grid = make_n_grid(cfg.n_grid);
  if ((has("rates") || has("dyadic") || has("oracle")) && cfg.reps < 100)
    throw ConfigError("reps", "rates, dyadic and oracle suites need reps >= 100");
  if ((has("lln") || has("carleson")) && cfg.reps < 30)
    throw ConfigError("reps", "lln and carleson suites need reps >= 30");
  if ((has("rates") || has("dyadic")) && cfg.n_grid.points < 4)
    throw ConfigError("n_grid.points", "rates and dyadic suites need at least 4 grid points");
  if (has("dyadic")) {
    if (cfg.n_grid.gamma != 2.0)
      throw ConfigError("n_grid.gamma", "dyadic suite needs gamma = 2");
    if (cfg.n_grid.n0 < 2 || !std::has_single_bit(cfg.n_grid.n0))
      throw ConfigError("n_grid.n0", "dyadic suite needs a power of two, at least 2");
  }
  if (grid.back() > max_sample_length(cfg.distribution))
    throw ConfigError("n_grid", "pairwise rademacher sequences stop at 2^m - 1");
  if (has("bounds") && !std::isfinite(moment_abs(cfg.distribution, 1.0)))
    throw ConfigError("distribution", "bounds suite requires a finite first absolute moment");
  if (has("maximal")) {
    bool any = false;
    for (std::uint64_t n : grid) any = any || (n >= 16 && n <= 4096);
    if (!any) throw ConfigError("n_grid", "maximal suite needs a grid point in [16, 4096]");
  }
  return cfg;
}

inline RunConfig parse_run_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("json", e.what());
  }
  return parse_run_config(j);
}

inline nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["distribution"] = detail::distribution_to_json(cfg.distribution);
  j["p"] = cfg.p;
  j["r"] = cfg.r;
  j["epsilon"] = cfg.epsilon;
  nlohmann::json tm;
  if (cfg.t_mode.kind == TModeKind::FixedGrid) {
    tm["mode"] = "fixed_grid";
    tm["values"] = cfg.t_mode.values;
  } else {
    tm["mode"] = "random_draws";
    tm["count"] = cfg.t_mode.count;
    tm["seed"] = cfg.t_mode.seed;
  }
  j["t_mode"] = tm;
  j["n_grid"] = {{"n0", cfg.n_grid.n0}, {"gamma", cfg.n_grid.gamma}, {"points", cfg.n_grid.points}};
  j["reps"] = cfg.reps;
  j["master_seed"] = cfg.master_seed;
  j["suites"] = cfg.suites;
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  return j;
}

}  // namespace dftlab

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dftlab/config.hpp"
#include "dftlab/csv.hpp"
#include "dftlab/diagnostics.hpp"
#include "dftlab/distributions.hpp"
#include "dftlab/monte_carlo.hpp"
#include "dftlab/oracle.hpp"
#include "dftlab/parallel.hpp"
#include "dftlab/sequence_engine.hpp"

namespace dftlab {

// Seed-stream ordinals. Each suite derives its sub-master from the run's
// master seed and its own ordinal, so adding or removing suites from a run
// never shifts the randomness of the others.
inline constexpr std::uint64_t kSuiteLln = 1;
inline constexpr std::uint64_t kSuiteRates = 2;
inline constexpr std::uint64_t kSuiteDyadic = 3;
inline constexpr std::uint64_t kSuiteCarleson = 4;
inline constexpr std::uint64_t kSuiteMaximal = 5;
inline constexpr std::uint64_t kSuiteBounds = 6;
inline constexpr std::uint64_t kSuiteOracle = 7;

struct OracleCase {
  std::uint64_t n = 0;
  double t = 0.0;
  double q = 0.0;
};

// Fixed validation battery: every (n, t) pair from a small product grid with
// quantile targets cycled across it, plus four extreme-quantile cases where
// the Wilson interval is most asymmetric.
inline std::vector<OracleCase> oracle_battery() {
  const std::uint64_t ns[] = {2, 4, 8, 12};
  const double ts[] = {0.0, 1.0, kPi / 2.0, 2.5};
  const double qs[] = {0.25, 0.5, 0.75, 0.9};
  std::vector<OracleCase> cases;
  std::size_t flat = 0;
  for (std::uint64_t n : ns)
    for (double t : ts) cases.push_back({n, t, qs[flat++ % 4]});
  cases.push_back({12, 0.0, 0.05});
  cases.push_back({12, 1.0, 0.95});
  cases.push_back({12, kPi / 2.0, 0.10});
  cases.push_back({12, 2.5, 0.98});
  return cases;
}

namespace detail {

inline std::string sanitize_label(std::string label) {
  for (char& c : label)
    if (c == ',') c = ';';
  return label;
}

inline std::string utc_now_iso() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return sorted_quantile(v, 0.5);
}

}  // namespace detail

class Runner {
 public:
  Runner(RunConfig cfg, std::filesystem::path output_dir, unsigned threads = 1)
      : cfg_(std::move(cfg)),
        out_dir_(std::move(output_dir)),
        threads_(resolve_threads(threads)),
        t_values_(resolve_t_values(cfg_.t_mode)),
        n_grid_(make_n_grid(cfg_.n_grid)),
        label_(detail::sanitize_label(cfg_.distribution.label)) {}

  // Executes the configured suites in canonical order and writes every
  // artifact plus manifest.json into the output directory. Returns the
  // manifest. All CSV bytes are deterministic functions of the effective
  // config and thread-count independent; wall-clock enters only the
  // manifest's created_utc and timings.
  nlohmann::json run() {
    std::filesystem::create_directories(out_dir_);
    for (const auto& suite : known_suites()) {
      if (!has_suite(suite)) continue;
      const auto start = std::chrono::steady_clock::now();
      if (suite == "oracle")
        run_oracle();
      else if (suite == "lln")
        run_lln();
      else if (suite == "rates")
        run_rates();
      else if (suite == "dyadic")
        run_dyadic();
      else if (suite == "carleson")
        run_carleson();
      else if (suite == "maximal")
        run_maximal();
      else if (suite == "bounds")
        run_bounds();
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      timings_[suite] = dt.count();
    }
    if (!verdict_rows_.empty()) {
      emit("series_verdict.csv",
           "series,t,beta,total,fitted_decay,tolerance,classification\n" + verdict_rows_);
      emit("series_partials.csv", "series,t,index,partial_sum\n" + partial_rows_);
    }
    nlohmann::json manifest;
    manifest["schema"] = "dftlab-run-manifest/1";
    manifest["created_utc"] = detail::utc_now_iso();
    manifest["config"] = run_config_to_json(cfg_);
    manifest["resolved"] = {
        {"t_values", t_values_}, {"n_grid", n_grid_}, {"threads", threads_}};
    manifest["files"] = files_;
    manifest["timings_seconds"] = timings_;
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    out.exceptions(std::ios::failbit | std::ios::badbit);
    out << manifest.dump(2) << '\n';
    out.close();
    return manifest;
  }

  const std::vector<double>& t_values() const { return t_values_; }
  const std::vector<std::uint64_t>& n_grid() const { return n_grid_; }

 private:
  bool has_suite(const std::string& name) const {
    for (const auto& s : cfg_.suites)
      if (s == name) return true;
    return false;
  }

  void emit(const std::string& name, const std::string& body) {
    std::ofstream out(out_dir_ / name, std::ios::binary);
    out.exceptions(std::ios::failbit | std::ios::badbit);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.close();
    files_.push_back(
        {{"name", name}, {"bytes", body.size()}, {"fnv1a64", fnv1a64_hex(body)}});
  }

  void record_verdict(const std::string& series, double t, const SeriesDiagnostic& d) {
    append_csv_row(verdict_rows_,
                   {series, fmt17(t), fmt17(d.weights_exponent),
                    fmt17(d.partial_sums.back().second), fmt17(d.fitted_decay),
                    fmt17(d.tolerance_used), to_string(d.classification)});
    for (const auto& [x, s] : d.partial_sums)
      append_csv_row(partial_rows_, {series, fmt17(t), fmt17(x), fmt17(s)});
  }

  void append_estimate_row(std::string& body, double t, double r,
                           const TailProbEstimate& pt) {
    append_csv_row(body, {label_, fmt17(t), std::to_string(pt.n), fmt17(cfg_.epsilon),
                          fmt17(r), fmt17(pt.threshold), std::to_string(pt.reps),
                          std::to_string(pt.hits), fmt17(pt.p_hat), fmt17(pt.ci_low),
                          fmt17(pt.ci_high)});
  }

  // The exact laws are enumerable only for small discrete alphabets, so this
  // suite always exercises the Rademacher law regardless of the configured
  // distribution; the config label is carried along for provenance.
  void run_oracle() {
    const std::uint64_t sm = derive_seed(cfg_.master_seed, kSuiteOracle);
    const DiscreteLaw law = rademacher_law();
    std::string body =
        "config,label,t,n,q,threshold,exact,reps,hits,p_hat,ci_low,ci_high,covered\n";
    const auto battery = oracle_battery();
    for (std::size_t ci = 0; ci < battery.size(); ++ci) {
      const OracleCase& oc = battery[ci];
      const auto dist = exact_prefix_max_distribution(law, oc.t, oc.n);
      const double thr = threshold_for_quantile(dist, oc.q);
      const double exact = exact_exceedance(law, oc.t, oc.n, thr);
      const TailProbEstimate est = estimate_tail_prob_at_threshold(
          rademacher(), oc.t, oc.n, thr, cfg_.reps, sm,
          static_cast<std::uint64_t>(ci) * cfg_.reps, threads_);
      const bool covered = est.ci_low <= exact && exact <= est.ci_high;
      append_csv_row(body,
                     {label_, "rademacher", fmt17(oc.t), std::to_string(oc.n), fmt17(oc.q),
                      fmt17(thr), fmt17(exact), std::to_string(est.reps),
                      std::to_string(est.hits), fmt17(est.p_hat), fmt17(est.ci_low),
                      fmt17(est.ci_high), covered ? "1" : "0"});
    }
    emit("oracle.csv", body);
  }

  void run_lln() {
    const std::uint64_t sm = derive_seed(cfg_.master_seed, kSuiteLln);
    std::string body =
        "label,t,n,q10_over_n,median_over_n,q90_over_n,q10_over_np,median_over_np,"
        "q90_over_np\n";
    std::string raw = "label,t,seed_index,n,abs_sum\n";
    const std::uint64_t keep = std::min<std::uint64_t>(cfg_.reps, 64);
    for (std::size_t ti = 0; ti < t_values_.size(); ++ti) {
      const double t = t_values_[ti];
      const LlnTrajectory traj =
          lln_trajectory(cfg_.distribution, t, n_grid_, cfg_.reps, cfg_.p, sm,
                         static_cast<std::uint64_t>(ti) * cfg_.reps, threads_);
      for (const auto& pt : traj.points)
        append_csv_row(body, {label_, fmt17(t), std::to_string(pt.n), fmt17(pt.q10_over_n),
                              fmt17(pt.median_over_n), fmt17(pt.q90_over_n),
                              fmt17(pt.q10_over_np), fmt17(pt.median_over_np),
                              fmt17(pt.q90_over_np)});
      for (std::size_t g = 0; g < n_grid_.size(); ++g)
        for (std::uint64_t i = 0; i < keep; ++i)
          append_csv_row(raw, {label_, fmt17(t), std::to_string(i),
                               std::to_string(n_grid_[g]), fmt17(traj.abs_sums[g][i])});
    }
    emit("lln.csv", body);
    emit("lln_raw.csv", raw);
  }

  // Grid for the rates suite: the configured geometric grid plus a dense
  // integer head, so the between-point interpolation of the series total is
  // anchored where the terms change fastest.
  std::vector<std::uint64_t> rates_grid() const {
    std::set<std::uint64_t> s(n_grid_.begin(), n_grid_.end());
    const std::uint64_t head_hi = std::min<std::uint64_t>(64, n_grid_.back());
    for (std::uint64_t n = n_grid_.front(); n <= head_hi; ++n) s.insert(n);
    return {s.begin(), s.end()};
  }

  void run_rates() {
    const std::uint64_t sm = derive_seed(cfg_.master_seed, kSuiteRates);
    const std::vector<std::uint64_t> ns = rates_grid();
    std::string body = "label,t,n,epsilon,r,threshold,reps,hits,p_hat,ci_low,ci_high\n";
    for (std::size_t ti = 0; ti < t_values_.size(); ++ti) {
      const double t = t_values_[ti];
      const ExceedanceCurve curve = estimate_exceedance_curve(
          cfg_.distribution, t, ns, cfg_.epsilon, cfg_.r, cfg_.reps, sm,
          static_cast<std::uint64_t>(ti) * ns.size() * cfg_.reps, threads_, cfg_.p);
      for (const auto& pt : curve.points) append_estimate_row(body, t, cfg_.r, pt);
      record_verdict("baum_katz", t, baum_katz_series(curve, cfg_.p, cfg_.r));
    }
    emit("rates.csv", body);
  }

  void run_dyadic() {
    const std::uint64_t sm = derive_seed(cfg_.master_seed, kSuiteDyadic);
    std::string body = "label,t,n,epsilon,r,threshold,reps,hits,p_hat,ci_low,ci_high\n";
    for (std::size_t ti = 0; ti < t_values_.size(); ++ti) {
      const double t = t_values_[ti];
      const ExceedanceCurve curve = estimate_exceedance_curve(
          cfg_.distribution, t, n_grid_, cfg_.epsilon, cfg_.p, cfg_.reps, sm,
          static_cast<std::uint64_t>(ti) * n_grid_.size() * cfg_.reps, threads_, cfg_.p);
      for (const auto& pt : curve.points) append_estimate_row(body, t, cfg_.p, pt);
      record_verdict("dyadic", t, dyadic_series(curve.points, cfg_.p));
    }
    emit("dyadic.csv", body);
  }

  void run_carleson() {
    const std::uint64_t sm = derive_seed(cfg_.master_seed, kSuiteCarleson);
    const std::uint64_t n = n_grid_.back();
    const std::uint64_t seeds = cfg_.reps;
    const std::vector<std::uint64_t> geo = geometric_checkpoints(n);
    std::vector<std::uint64_t> powers;
    for (std::uint64_t pw = 1; pw <= n;) {
      powers.push_back(pw);
      if (pw > n / 2) break;
      pw *= 2;
    }
    std::set<std::uint64_t> recset(geo.begin(), geo.end());
    recset.insert(powers.begin(), powers.end());
    const std::vector<std::uint64_t> record_at(recset.begin(), recset.end());
    std::vector<std::size_t> power_pos;
    for (std::uint64_t pw : powers) {
      const auto it = std::lower_bound(record_at.begin(), record_at.end(), pw);
      power_pos.push_back(static_cast<std::size_t>(it - record_at.begin()));
    }

    std::string wbody = "label,t,seed_index,k,abs_T_k\n";
    std::string kbody = "label,t,seed_index,k,abs_S_k_over_k\n";
    std::string tbody = "label,t,seed_index,n,mismatches\n";
    std::string wsum = "label,t,k_from,k_to,median_abs_increment\n";
    std::string ksum = "label,t,k,median_abs_S_k_over_k\n";
    const std::uint64_t keep = std::min<std::uint64_t>(seeds, 8);

    for (std::size_t ti = 0; ti < t_values_.size(); ++ti) {
      const double t = t_values_[ti];
      std::vector<std::uint64_t> mism(seeds, 0);
      std::vector<std::vector<double>> wmag(seeds);
      std::vector<std::vector<std::complex<double>>> wpart(seeds);
      std::vector<std::vector<double>> kron(seeds);
      parallel_for(seeds, threads_, [&](std::uint64_t si) {
        Sampler smp(cfg_.distribution,
                    derive_seed(sm, static_cast<std::uint64_t>(ti) * seeds + si));
        std::vector<double> xs(n);
        for (double& x : xs) x = smp.next();
        const TruncationResult tr = truncate_at_index(xs);
        mism[si] = tr.mismatches;
        const WeightedSeriesResult w = weighted_fourier_series(tr.ys, t, record_at);
        wmag[si].reserve(w.checkpoints.size());
        for (const auto& [k, m] : w.checkpoints) wmag[si].push_back(m);
        wpart[si].reserve(w.partials.size());
        for (const auto& [k, z] : w.partials) wpart[si].push_back(z);
        const PrefixScanResult scan = dft_prefix_scan(xs, t);
        kron[si].reserve(scan.checkpoints.size());
        for (const auto& [k, m] : scan.checkpoints)
          kron[si].push_back(m / static_cast<double>(k));
      });
      for (std::uint64_t si = 0; si < seeds; ++si)
        append_csv_row(tbody, {label_, fmt17(t), std::to_string(si), std::to_string(n),
                               std::to_string(mism[si])});
      for (std::uint64_t si = 0; si < keep; ++si) {
        for (std::size_t j = 0; j < record_at.size(); ++j)
          append_csv_row(wbody, {label_, fmt17(t), std::to_string(si),
                                 std::to_string(record_at[j]), fmt17(wmag[si][j])});
        for (std::size_t j = 0; j < geo.size(); ++j)
          append_csv_row(kbody, {label_, fmt17(t), std::to_string(si),
                                 std::to_string(geo[j]), fmt17(kron[si][j])});
      }
      for (std::size_t pj = 0; pj + 1 < powers.size(); ++pj) {
        std::vector<double> incs(seeds);
        for (std::uint64_t si = 0; si < seeds; ++si)
          incs[si] = std::abs(wpart[si][power_pos[pj + 1]] - wpart[si][power_pos[pj]]);
        append_csv_row(wsum, {label_, fmt17(t), std::to_string(powers[pj]),
                              std::to_string(powers[pj + 1]),
                              fmt17(detail::median_of(std::move(incs)))});
      }
      for (std::size_t j = 0; j < geo.size(); ++j) {
        std::vector<double> vals(seeds);
        for (std::uint64_t si = 0; si < seeds; ++si) vals[si] = kron[si][j];
        append_csv_row(ksum, {label_, fmt17(t), std::to_string(geo[j]),
                              fmt17(detail::median_of(std::move(vals)))});
      }
    }
    emit("carleson_weighted.csv", wbody);
    emit("carleson_kron.csv", kbody);
    emit("carleson_trunc.csv", tbody);
    emit("carleson_summary.csv", wsum);
    emit("carleson_kron_summary.csv", ksum);
  }

  void run_maximal() {
    const std::uint64_t sm = derive_seed(cfg_.master_seed, kSuiteMaximal);
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n : n_grid_)
      if (n >= 16 && n <= 4096) ns.push_back(n);
    const std::uint64_t hyreps = std::min<std::uint64_t>(cfg_.reps, 1000);
    std::string raw = "label,n,seed_index,ratio,integral,rhs\n";
    std::string sum = "label,n,reps,nan_count,min,p50,p99,max\n";
    const std::uint64_t keep = std::min<std::uint64_t>(hyreps, 64);
    for (std::size_t gi = 0; gi < ns.size(); ++gi) {
      const std::uint64_t n = ns[gi];
      const double c = std::pow(static_cast<double>(n), 1.0 / cfg_.r);
      std::vector<double> ratios(hyreps), integrals(hyreps), rhss(hyreps);
      parallel_for(hyreps, threads_, [&](std::uint64_t i) {
        Sampler smp(cfg_.distribution,
                    derive_seed(sm, static_cast<std::uint64_t>(gi) * hyreps + i));
        std::vector<double> xs(n);
        for (double& x : xs) x = smp.next();
        const HuntYoungResult hy = hunt_young_ratio(xs, c, n, 2 * n);
        ratios[i] = hy.ratio;
        integrals[i] = hy.integral;
        rhss[i] = hy.rhs;
      });
      for (std::uint64_t i = 0; i < keep; ++i)
        append_csv_row(raw, {label_, std::to_string(n), std::to_string(i), fmt17(ratios[i]),
                             fmt17(integrals[i]), fmt17(rhss[i])});
      std::vector<double> finite;
      std::uint64_t nans = 0;
      for (double v : ratios) {
        if (std::isnan(v))
          ++nans;
        else
          finite.push_back(v);
      }
      double mn = std::numeric_limits<double>::quiet_NaN(), p50 = mn, p99 = mn, mx = mn;
      if (!finite.empty()) {
        std::sort(finite.begin(), finite.end());
        mn = finite.front();
        mx = finite.back();
        p50 = detail::sorted_quantile(finite, 0.5);
        p99 = detail::sorted_quantile(finite, 0.99);
      }
      append_csv_row(sum, {label_, std::to_string(n), std::to_string(hyreps),
                           std::to_string(nans), fmt17(mn), fmt17(p50), fmt17(p99),
                           fmt17(mx)});
    }
    emit("maximal.csv", raw);
    emit("maximal_summary.csv", sum);
  }

  void run_bounds() {
    const KolmogorovBound kb = kolmogorov_weighted_bound(cfg_.distribution, 10000000ull);
    std::string kbody = "label,k,partial_lhs,bound\n";
    for (const auto& [k, v] : kb.checkpoints)
      append_csv_row(kbody, {label_, std::to_string(k), fmt17(v), fmt17(kb.bound)});
    emit("bounds_kolmogorov.csv", kbody);

    const std::uint64_t N =
        cfg_.distribution.kind == DistKind::ScaledFamily ? 20000ull : 100000ull;
    const StoicaBounds sb = stoica_bounds(cfg_.distribution, cfg_.p, cfg_.r, N);
    std::string sbody = "label,curve,n,partial\n";
    for (const auto& [nn, v] : sb.curve1)
      append_csv_row(sbody, {label_, "trunc2", std::to_string(nn), fmt17(v)});
    for (const auto& [nn, v] : sb.curve2)
      append_csv_row(sbody, {label_, "tail1", std::to_string(nn), fmt17(v)});
    emit("bounds_stoica.csv", sbody);
  }

  RunConfig cfg_;
  std::filesystem::path out_dir_;
  unsigned threads_;
  std::vector<double> t_values_;
  std::vector<std::uint64_t> n_grid_;
  std::string label_;
  nlohmann::json files_ = nlohmann::json::array();
  nlohmann::json timings_ = nlohmann::json::object();
  std::string verdict_rows_;
  std::string partial_rows_;
};

namespace detail {

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string fmt6(const std::string& cell) { return fmt6(std::stod(cell)); }

}  // namespace detail

// Verifies every artifact against the manifest checksums, then prints a
// human-oriented digest. Returns 0 on success, 3 on any integrity failure.
inline int report_run(const std::string& manifest_path, std::ostream& os) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    os << "integrity error: " << e.what() << "\n";
    return 3;
  }
  const std::filesystem::path dir = std::filesystem::path(manifest_path).parent_path();
  std::set<std::string> names;
  try {
    if (!manifest.contains("files") || !manifest["files"].is_array())
      throw std::runtime_error("manifest has no files array");
    for (const auto& f : manifest["files"]) {
      const std::string name = f.at("name").get<std::string>();
      const std::string bytes = read_file((dir / name).string());
      if (bytes.size() != f.at("bytes").get<std::uint64_t>() ||
          fnv1a64_hex(bytes) != f.at("fnv1a64").get<std::string>())
        throw std::runtime_error("checksum mismatch for " + name);
      names.insert(name);
    }
  } catch (const std::exception& e) {
    os << "integrity error: " << e.what() << "\n";
    return 3;
  }

  const nlohmann::json& cfg = manifest["config"];
  os << "run: " << cfg["distribution"]["kind"].get<std::string>()
     << " p=" << detail::fmt6(cfg["p"].get<double>())
     << " r=" << detail::fmt6(cfg["r"].get<double>())
     << " epsilon=" << detail::fmt6(cfg["epsilon"].get<double>())
     << " reps=" << cfg["reps"].get<std::uint64_t>()
     << " master_seed=" << cfg["master_seed"].get<std::uint64_t>() << "\n";
  os << "files: " << names.size() << " verified\n";
  if (names.empty()) {
    os << "no suites executed\n";
    return 0;
  }

  const auto csv = [&](const std::string& name) { return read_csv((dir / name).string()); };

  if (names.count("oracle.csv")) {
    const auto rows = csv("oracle.csv");
    const std::size_t cov = csv_column(rows[0], "covered");
    std::size_t hit = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) hit += rows[i][cov] == "1";
    os << "oracle: " << hit << "/" << rows.size() - 1
       << " intervals covered the exact probability\n";
  }
  if (names.count("series_verdict.csv")) {
    const auto rows = csv("series_verdict.csv");
    const std::size_t cs = csv_column(rows[0], "series");
    const std::size_t ct = csv_column(rows[0], "t");
    const std::size_t ctot = csv_column(rows[0], "total");
    const std::size_t cfd = csv_column(rows[0], "fitted_decay");
    const std::size_t ccl = csv_column(rows[0], "classification");
    std::map<std::string, std::set<std::string>> verdicts;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      os << rows[i][cs] << "[t=" << detail::fmt6(rows[i][ct]) << "]: " << rows[i][ccl]
         << " (total=" << detail::fmt6(rows[i][ctot])
         << ", fitted decay=" << detail::fmt6(rows[i][cfd]) << ")\n";
      verdicts[rows[i][cs]].insert(rows[i][ccl]);
    }
    for (const auto& [series, set] : verdicts) {
      if (set.size() == 1)
        os << series << ": " << *set.begin() << " at every t\n";
      else
        os << series << ": mixed verdicts\n";
    }
  }
  if (names.count("lln.csv")) {
    const auto rows = csv("lln.csv");
    const std::size_t ct = csv_column(rows[0], "t");
    const std::size_t cn = csv_column(rows[0], "n");
    const std::size_t cmn = csv_column(rows[0], "median_over_n");
    const std::size_t cmp = csv_column(rows[0], "median_over_np");
    std::map<std::string, std::size_t> last;
    for (std::size_t i = 1; i < rows.size(); ++i) last[rows[i][ct]] = i;
    for (const auto& [t, i] : last)
      os << "lln[t=" << detail::fmt6(t) << "]: at n=" << rows[i][cn]
         << " median |S_n|/n=" << detail::fmt6(rows[i][cmn])
         << ", median |S_n|/n^(1/p)=" << detail::fmt6(rows[i][cmp]) << "\n";
  }
  if (names.count("carleson_summary.csv")) {
    const auto rows = csv("carleson_summary.csv");
    const std::size_t ct = csv_column(rows[0], "t");
    const std::size_t cf = csv_column(rows[0], "k_from");
    const std::size_t cv = csv_column(rows[0], "median_abs_increment");
    std::map<std::string, std::size_t> last;
    for (std::size_t i = 1; i < rows.size(); ++i) last[rows[i][ct]] = i;
    for (const auto& [t, i] : last)
      os << "carleson[t=" << detail::fmt6(t) << "]: median tail increment "
         << detail::fmt6(rows[i][cv]) << " from k=" << rows[i][cf] << "\n";
  }
  if (names.count("maximal_summary.csv")) {
    const auto rows = csv("maximal_summary.csv");
    const std::size_t cn = csv_column(rows[0], "n");
    const std::size_t cp50 = csv_column(rows[0], "p50");
    const std::size_t cp99 = csv_column(rows[0], "p99");
    for (std::size_t i = 1; i < rows.size(); ++i)
      os << "maximal[n=" << rows[i][cn] << "]: ratio p50=" << detail::fmt6(rows[i][cp50])
         << " p99=" << detail::fmt6(rows[i][cp99]) << "\n";
  }
  if (names.count("bounds_kolmogorov.csv")) {
    const auto rows = csv("bounds_kolmogorov.csv");
    const std::size_t cl = csv_column(rows[0], "partial_lhs");
    const std::size_t cb = csv_column(rows[0], "bound");
    const auto& lastrow = rows.back();
    const double lhs = std::stod(lastrow[cl]);
    const double bound = std::stod(lastrow[cb]);
    os << "kolmogorov: lhs=" << detail::fmt6(lhs) << " bound=" << detail::fmt6(bound)
       << (lhs <= bound ? " (holds)" : " (VIOLATED)") << "\n";
  }
  if (names.count("bounds_stoica.csv")) {
    const auto rows = csv("bounds_stoica.csv");
    const std::size_t cc = csv_column(rows[0], "curve");
    const std::size_t cv = csv_column(rows[0], "partial");
    std::map<std::string, std::vector<double>> curves;
    for (std::size_t i = 1; i < rows.size(); ++i)
      curves[rows[i][cc]].push_back(std::stod(rows[i][cv]));
    for (const auto& [curve, vals] : curves) {
      if (vals.size() >= 2)
        os << "stoica " << curve << ": partial=" << detail::fmt6(vals.back())
           << " last-decade increment=" << detail::fmt6(vals.back() - vals[vals.size() - 2])
           << "\n";
      else
        os << "stoica " << curve << ": partial=" << detail::fmt6(vals.back()) << "\n";
    }
  }
  return 0;
}

}  // namespace dftlab

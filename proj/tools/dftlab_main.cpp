#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dftlab/dftlab.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string cell =
        comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw dftlab::ConfigError(what, "cannot parse '" + cell + "' as a number");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return vals;
}

std::string slurp_config(const std::string& path) {
  try {
    return dftlab::read_file(path);
  } catch (const std::exception& e) {
    throw dftlab::ConfigError("config", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for random Fourier partial sums"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute the configured suites");
  std::string run_config, run_output;
  std::uint64_t run_seed = 0;
  unsigned run_threads = 1;
  run->add_option("--config", run_config, "JSON run configuration")->required();
  run->add_option("--output", run_output, "output directory");
  run->add_option("--seed", run_seed, "override the config's master_seed");
  run->add_option("--threads", run_threads, "worker threads (0 = all cores)");

  auto* validate = app.add_subcommand("validate", "check a configuration and exit");
  std::string val_config;
  validate->add_option("--config", val_config, "JSON run configuration")->required();

  auto* report = app.add_subcommand("report", "verify and summarize a finished run");
  std::string manifest_path;
  report->add_option("manifest", manifest_path, "path to manifest.json")->required();

  auto* oracle = app.add_subcommand("oracle", "exact finite-n exceedance probabilities");
  double o_t = 0.0;
  std::uint64_t o_n = 0;
  double o_threshold = std::numeric_limits<double>::quiet_NaN();
  std::string o_support, o_probs;
  bool o_dist = false;
  oracle->add_option("--t", o_t, "frequency in [-pi, pi)")->required();
  oracle->add_option("--n", o_n, "sequence length")->required();
  oracle->add_option("--threshold", o_threshold, "exceedance threshold");
  oracle->add_option("--support", o_support, "comma-separated atom values");
  oracle->add_option("--probs", o_probs, "comma-separated atom probabilities");
  oracle->add_flag("--distribution", o_dist, "print the full prefix-max distribution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      dftlab::RunConfig cfg = dftlab::parse_run_config_text(slurp_config(run_config));
      if (run->count("--seed")) cfg.master_seed = run_seed;
      std::string out_dir = run_output;
      if (out_dir.empty()) out_dir = cfg.output_dir;
      if (out_dir.empty())
        if (const char* env = std::getenv("DFTLAB_OUTPUT_DIR")) out_dir = env;
      if (out_dir.empty()) out_dir = "dftlab_out";
      dftlab::Runner runner(cfg, out_dir, run_threads);
      const nlohmann::json manifest = runner.run();
      std::cout << "wrote " << (std::filesystem::path(out_dir) / "manifest.json").string()
                << " (" << manifest["files"].size() << " artifacts)\n";
      for (const auto& [suite, secs] : manifest["timings_seconds"].items())
        std::cout << "  " << suite << ": " << secs.get<double>() << " s\n";
      return 0;
    }
    if (*validate) {
      const dftlab::RunConfig cfg = dftlab::parse_run_config_text(slurp_config(val_config));
      const auto grid = dftlab::make_n_grid(cfg.n_grid);
      const auto ts = dftlab::resolve_t_values(cfg.t_mode);
      std::cout << "config ok: " << cfg.suites.size() << " suites, " << ts.size()
                << " t values, n grid " << grid.front() << ".." << grid.back() << " ("
                << grid.size() << " points)\n";
      return 0;
    }
    if (*report) return dftlab::report_run(manifest_path, std::cout);
    if (*oracle) {
      dftlab::DiscreteLaw law = dftlab::rademacher_law();
      if (oracle->count("--support") || oracle->count("--probs")) {
        if (!(oracle->count("--support") && oracle->count("--probs")))
          throw dftlab::ConfigError("oracle", "--support and --probs must be given together");
        law = dftlab::discrete_law(parse_double_list(o_support, "--support"),
                                   parse_double_list(o_probs, "--probs"));
      }
      if (o_dist) {
        std::cout << "value,prob\n";
        for (const auto& [v, p] : dftlab::exact_prefix_max_distribution(law, o_t, o_n))
          std::cout << dftlab::fmt17(v) << "," << dftlab::fmt17(p) << "\n";
        return 0;
      }
      if (std::isnan(o_threshold))
        throw dftlab::ConfigError("oracle",
                                  "--threshold is required unless --distribution is set");
      std::cout << dftlab::fmt17(dftlab::exact_exceedance(law, o_t, o_n, o_threshold))
                << "\n";
      return 0;
    }
  } catch (const dftlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

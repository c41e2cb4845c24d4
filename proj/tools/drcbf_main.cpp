// Command-line front end: closed-loop simulation of the robust safety filter,
// Monte Carlo studies, margin sweeps and constants estimation.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "drcbf/config.hpp"
#include "drcbf/io.hpp"

namespace fs = std::filesystem;
using namespace drcbf;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string constants_path;
  std::string out_dir = ".";
  std::string filter;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Scenario config file (TOML subset)");
  cmd->add_option("--constants", opts.constants_path,
                  "Lipschitz-constants sidecar (skips re-sampling)");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--filter", opts.filter,
                  "Safety filter: none|vanilla|ct|sd|reach");
  cmd->add_option("--seed", opts.seed, "Master seed");
}

Scenario make_scenario(const CommonOpts& opts) {
  Scenario sc = opts.config_path.empty()
                    ? Scenario::paper_default()
                    : scenario_from_config(Config::parse_file(opts.config_path));
  if (!opts.filter.empty()) sc.filter = filter_kind_from_string(opts.filter);
  if (opts.seed >= 0) sc.seed = static_cast<std::uint64_t>(opts.seed);
  if (!opts.constants_path.empty())
    sc.estimates = load_constants_file(opts.constants_path);
  sc.validate();
  return sc;
}

std::ofstream open_out(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  const fs::path path = fs::path(opts.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly robust control barrier function simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  int runs = 100;

  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop episode");
  add_common(simulate, opts);
  auto* montecarlo =
      app.add_subcommand("montecarlo", "Run N randomized episodes");
  add_common(montecarlo, opts);
  montecarlo->add_option("--runs", runs, "Number of episodes");
  auto* margins = app.add_subcommand(
      "margins", "Reach-margin sweep over sampling times at the start state");
  add_common(margins, opts);
  auto* reach = app.add_subcommand(
      "reach", "Per-step reach boxes of one episode");
  add_common(reach, opts);
  auto* constants = app.add_subcommand(
      "constants", "Estimate Lipschitz constants and write the sidecar");
  add_common(constants, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed() || reach->parsed()) {
      Scenario sc = make_scenario(opts);
      if (reach->parsed() && opts.filter.empty()) sc.filter = FilterKind::Reach;
      const Trajectory traj = run_episode(sc);
      if (simulate->parsed()) {
        { auto out = open_out(opts, "trajectory.csv"); write_trajectory_csv(out, traj); }
        { auto out = open_out(opts, "summary.json"); write_summary_json(out, sc, traj); }
        std::cout << "episode seed " << traj.seed << ": min h = "
                  << fmt9(traj.min_h) << (traj.min_h < 0 ? " (collision)" : "")
                  << ", infeasible steps = " << traj.infeasible_steps << '\n';
      } else {
        auto out = open_out(opts, "reach.csv");
        write_reach_csv(out, traj);
        std::cout << "wrote per-step reach boxes for " << sc.steps()
                  << " steps\n";
      }
    } else if (montecarlo->parsed()) {
      const Scenario sc = make_scenario(opts);
      const SummaryStats stats = monte_carlo(sc, runs);
      { auto out = open_out(opts, "stats.json"); write_stats_json(out, sc, runs, stats); }
      { auto out = open_out(opts, "min_h.csv"); write_min_h_csv(out, stats); }
      std::cout << runs << " runs (" << to_string(sc.filter)
                << "): min h in [" << fmt9(stats.min_h_min) << ", "
                << fmt9(stats.min_h_max) << "], mean "
                << fmt9(stats.min_h_mean) << ", collisions "
                << stats.collisions << '\n';
    } else if (margins->parsed()) {
      const Scenario sc = make_scenario(opts);
      std::vector<double> t_list;
      for (int i = 1; i <= 10; ++i) t_list.push_back(0.01 * i);
      const auto rows = margin_sweep(sc, t_list);
      auto out = open_out(opts, "margins.csv");
      write_margins_csv(out, rows);
      std::cout << "wrote " << rows.size() << " margin rows\n";
    } else if (constants->parsed()) {
      Scenario sc = opts.config_path.empty()
                        ? Scenario::paper_default()
                        : scenario_from_config(Config::parse_file(opts.config_path));
      if (opts.seed >= 0) sc.constants_seed = static_cast<std::uint64_t>(opts.seed);
      const auto sys = unicycle();
      const auto chain = unicycle_obstacle_chain(sc.obstacle, sc.alpha1, sc.alpha2);
      const LipschitzEstimates est =
          estimate_constants(sys, chain, sc.domain, sc.input_box,
                             sc.constant_samples, sc.safety_factor,
                             sc.constants_seed);
      auto out = open_out(opts, "constants.txt");
      save_constants(out, est, sc.constant_samples, sc.safety_factor,
                     sc.constants_seed);
      std::cout << "wrote constants sidecar (delta_sup = " << fmt9(est.delta_sup)
                << ", l_dyn = " << fmt9(est.l_dyn) << ")\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

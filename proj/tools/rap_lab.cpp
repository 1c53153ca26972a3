// rap-lab: train, evaluate and compare adversary-population agents.
#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rap/errors.hpp"
#include "rap/exp/experiment_config.hpp"
#include "rap/exp/manifest.hpp"
#include "rap/exp/runner.hpp"

namespace fs = std::filesystem;
using namespace rap;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void progress(const std::string& msg) { std::cerr << msg << '\n'; }

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> counts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      counts.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--counts: expected positive integers, got '" + item + "'");
    }
  }
  if (counts.empty()) throw ConfigError("--counts: empty list");
  return counts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust RL via adversary populations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", exp::tool_version());

  std::string config_path;
  std::int64_t seed_override = -1;
  auto* train = app.add_subcommand("train", "train every seed in a config, then evaluate and report");
  train->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  train->add_option("--seed-override", seed_override, "train only this seed")->check(CLI::NonNegativeNumber);

  std::string checkpoint_dir, eval_out;
  bool want_grid = false, want_holdout = false;
  auto* eval = app.add_subcommand("eval", "evaluate a trained seed directory");
  eval->add_option("--checkpoint", checkpoint_dir, "seed directory or its checkpoints/ folder")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_flag("--grid", want_grid, "mass x friction transfer grid");
  eval->add_flag("--holdout", want_holdout, "holdout suite");
  eval->add_option("--out", eval_out, "output directory (default: the checkpoint directory)");

  std::vector<std::string> runs;
  std::string swap_out = ".";
  auto* swap = app.add_subcommand("swap", "agent x adversary swap matrix across seeds");
  swap->add_option("--runs", runs, "run or seed directories")->required()->expected(1, -1);
  swap->add_option("--out", swap_out, "output directory");

  std::string sweep_config, counts_text = "1,2,3,5";
  auto* sweep = app.add_subcommand("sweep", "adversary-count sweep at a fixed step budget");
  sweep->add_option("--config", sweep_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--counts", counts_text, "comma separated population sizes");

  std::string report_run;
  auto* report = app.add_subcommand("report", "rebuild heatmaps and summary from a run's CSVs");
  report->add_option("--run", report_run, "run directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) {
      auto cfg = exp::load_config(config_path);
      if (seed_override >= 0) cfg.seeds = {static_cast<std::uint64_t>(seed_override)};
      const auto result = exp::run_experiment(cfg, progress);
      for (const auto& f : result.failures) std::cerr << "failed: " << f << '\n';
      std::cout << result.run_dir.string() << '\n';
      return result.exit_code;
    }
    if (*eval) {
      exp::EvalRequest request;
      request.checkpoint_dir = checkpoint_dir;
      request.out_dir = eval_out;
      // Neither flag given means both.
      request.grid = want_grid || !want_holdout;
      request.holdout = want_holdout || !want_grid;
      for (const auto& p : exp::evaluate_checkpoint(request)) std::cout << p.string() << '\n';
      return 0;
    }
    if (*swap) {
      std::vector<fs::path> paths(runs.begin(), runs.end());
      std::cout << exp::swap_runs(paths, swap_out).string() << '\n';
      return 0;
    }
    if (*sweep) {
      const auto cfg = exp::load_config(sweep_config);
      const auto counts = parse_counts(counts_text);
      std::cout << exp::run_sweep(cfg, counts, progress).string() << '\n';
      return 0;
    }
    if (*report) {
      for (const auto& p : exp::regenerate_report(report_run)) std::cout << p.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rap/exp/experiment_config.hpp"
#include "rap/exp/manifest.hpp"

namespace rap::exp {

struct RunResult {
  /// 0 success, 2 if any seed or stage failed.
  int exit_code = 0;
  std::filesystem::path run_dir;
  RunManifest manifest;
  std::vector<std::string> failures;
};

using ProgressFn = std::function<void(const std::string&)>;

/// For each seed: train and checkpoint, then transfer grid and holdout
/// evaluation. With >= 2 seeds and an adversarial mode, also the swap matrix.
/// Writes CSVs, SVGs, config.json and manifest.json under the resolved output
/// directory. A failing seed does not stop the others.
///
/// Layout:
///   config.json  manifest.json  summary.csv  [swap_matrix.csv]
///   seed_<k>/checkpoints/{agent,adversary_<i>}.ckpt
///   seed_<k>/{training_curve.csv, train_log.csv, holdout_suite.json,
///             transfer_grid.csv, transfer_grid.svg, holdout.csv}
RunResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Relative paths every successful run of `cfg` must produce.
std::vector<std::string> expected_artifacts(const ExperimentConfig& cfg);

/// Evaluates an existing seed directory (grid and/or holdout) using the
/// config.json found in it or its parent; writes results into out_dir.
struct EvalRequest {
  std::filesystem::path checkpoint_dir;
  std::filesystem::path out_dir;
  bool grid = true;
  bool holdout = true;
};
std::vector<std::filesystem::path> evaluate_checkpoint(const EvalRequest& request);

/// Swap matrix over seed directories (run directories expand to their seed_* children).
std::filesystem::path swap_runs(std::span<const std::filesystem::path> runs, const std::filesystem::path& out_dir);

/// Adversary-count sweep; writes sweep.csv under the resolved output directory.
std::filesystem::path run_sweep(const ExperimentConfig& cfg, std::span<const int> counts,
                                const ProgressFn& progress = {});

/// Regenerates heatmaps from the persisted grid CSVs and recomputes summary.csv.
std::vector<std::filesystem::path> regenerate_report(const std::filesystem::path& run_dir);

/// Locates config.json in `dir` or its ancestors (up to three levels).
std::filesystem::path find_config(const std::filesystem::path& dir);

}  // namespace rap::exp

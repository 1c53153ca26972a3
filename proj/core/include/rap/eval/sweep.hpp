#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rap/eval/evaluate.hpp"
#include "rap/train/config.hpp"

namespace rap::eval {

struct SweepCell {
  int count = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::int64_t env_steps = 0;
  double grid_mean = 0.0;
  double holdout_aggregate = 0.0;
};

struct SweepRow {
  int count = 0;
  double grid_mean = 0.0;
  double grid_std = 0.0;
  double holdout_mean = 0.0;
  double holdout_std = 0.0;
  /// Environment steps of each successful seed's training run.
  std::vector<std::int64_t> env_steps;
  int failed_seeds = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepRow> rows;
};

/// Trains rap(n = count) per (count, seed) on the base config's fixed step
/// budget and evaluates on the validation grid plus holdout aggregate.
/// Aggregates are mean and std over seeds. Failed cells are recorded and skipped.
SweepResult adversary_count_sweep(const train::TrainConfig& base, std::span<const int> counts,
                                  std::span<const std::uint64_t> seeds, const EvalSpec& spec,
                                  const std::function<void(const SweepCell&)>& on_cell = {});

/// count,grid_mean,grid_std,holdout_mean,holdout_std,env_steps_per_seed,failed_seeds
std::string sweep_to_csv(const SweepResult& result, const std::string& comment);

}  // namespace rap::eval

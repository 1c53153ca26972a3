#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rap/eval/evaluate.hpp"
#include "rap/train/config.hpp"

namespace rap::exp {

/// Training config plus evaluation protocol, seed list and output location.
///
/// File format is JSON with nested sections:
///   { "mode": "rap", "env_id": "point_wind_walker", "seed": 0, "n": 3,
///     "alpha": 1.0, "horizon": 200, "iterations": 150, "checkpoint_every": 25,
///     "hidden": [64, 64], "seeds": [0, 1, 2], "output_dir": "runs/rap3",
///     "ppo": { "gamma": 0.995, "lambda": 0.95, "clip": 0.3, ... },
///     "adversary_ppo": { ...same keys, optional... },
///     "domain": { "mass": [0.7, 1.3], "friction": [0.7, 1.3] },
///     "eval": { "mass_range": [0.7, 1.3], "friction_range": [0.7, 1.3],
///               "grid_points": 5, "holdout_hi": 1.3, "holdout_lo": 0.7, "n_rollouts": 20 } }
/// mode, env_id and seed are required; everything else has a default.
struct ExperimentConfig {
  train::TrainConfig train;
  eval::EvalSpec eval;
  /// Training seeds; defaults to {seed, seed + 1, seed + 2}.
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "rap_run";

  void validate() const;
};

/// ConfigError naming the key/field on unknown keys, range violations or missing required fields.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sorted-key JSON with every default filled in. The output directory is
/// omitted: it says where results go, not what the experiment is.
std::string canonical_config(const ExperimentConfig& cfg);

/// SHA-256 (hex) of canonical_config().
std::string config_hash(const ExperimentConfig& cfg);

std::string sha256_hex(std::string_view data);

/// Output root: $RAP_LAB_OUT / output_dir when the variable is set and output_dir is relative.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace rap::exp

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rap/env/dynamics_params.hpp"
#include "rap/eval/evaluate.hpp"
#include "rap/nn/policy.hpp"

namespace rap::eval {

/// Scores over a Cartesian mass x friction grid; scores[m][f].
struct TransferGrid {
  std::vector<double> mass_values;
  std::vector<double> friction_values;
  std::vector<std::vector<EvalScore>> scores;
  /// Non-empty message for cells whose evaluation failed.
  std::vector<std::vector<std::string>> failures;

  /// Unweighted mean of the cell means (failed cells excluded).
  double mean() const;
  double min_mean() const;
  double max_mean() const;
};

/// n evenly spaced points from lo to hi inclusive (n >= 2; n == 1 gives lo).
std::vector<double> linspace(env::Interval range, int n);

/// Every cell uses the same evaluation seed, and one scalar friction scale on all components.
TransferGrid transfer_grid(const nn::ActorCritic& agent, env::EnvId env_id, env::Interval mass_range,
                           env::Interval friction_range, int grid_points, int n_rollouts, std::uint64_t seed,
                           int horizon = env::kDefaultHorizon);

/// scores[s][t]: agent from run s against the adversaries of run t.
struct SwapMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<EvalScore>> scores;
  double alpha = 0.0;

  std::size_t size() const { return labels.size(); }
  /// Mean over rows s of (diag_s - mean_{t != s} off_s,t) / |diag_s|. 0 for a 1x1 matrix.
  double relative_degradation() const;
};

/// Cell (s, t) pools equally many rollouts against each adversary of run t,
/// so its mean is the average over those adversaries. Every cell uses the
/// same evaluation seed. ConfigError if the runs have different population sizes.
SwapMatrix swap_matrix(std::span<const nn::ActorCritic> agents,
                       std::span<const std::vector<nn::ActorCritic>> adversary_sets,
                       std::vector<std::string> labels, env::EnvId env_id, double alpha, int n_rollouts,
                       std::uint64_t seed, int horizon = env::kDefaultHorizon);

struct HoldoutReport {
  std::vector<std::pair<std::string, EvalScore>> tests;
  /// Unweighted mean of per-test means; standard deviations are not aggregated.
  double aggregate = 0.0;
};

HoldoutReport holdout_eval(const nn::ActorCritic& agent, env::EnvId env_id,
                           std::span<const env::NamedParams> suite, int n_rollouts, std::uint64_t seed,
                           int horizon = env::kDefaultHorizon);

// CSV forms. `comment` becomes a leading "# ..." line.
// Grid: header "mass\friction,f_0,f_1,...", rows "m_i,mean;std,...".
// Swap: header "agent\adversary,label_0,...", rows "label_s,mean;std,...".
// Holdout: "test,mean,std" rows then "aggregate,<mean>,".
std::string grid_to_csv(const TransferGrid& grid, const std::string& comment);
TransferGrid grid_from_csv(std::string_view text);
std::string swap_to_csv(const SwapMatrix& swap, const std::string& comment);
SwapMatrix swap_from_csv(std::string_view text);
std::string holdout_to_csv(const HoldoutReport& report, const std::string& comment);
HoldoutReport holdout_from_csv(std::string_view text);

}  // namespace rap::eval

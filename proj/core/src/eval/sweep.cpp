#include "rap/eval/sweep.hpp"

#include <cmath>
#include <numeric>

#include "rap/csv.hpp"
#include "rap/errors.hpp"
#include "rap/eval/reports.hpp"
#include "rap/train/trainer.hpp"

namespace rap::eval {
namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

}  // namespace

SweepResult adversary_count_sweep(const train::TrainConfig& base, std::span<const int> counts,
                                  std::span<const std::uint64_t> seeds, const EvalSpec& spec,
                                  const std::function<void(const SweepCell&)>& on_cell) {
  if (counts.empty() || seeds.empty()) throw ConfigError("sweep needs at least one count and one seed");
  for (int c : counts)
    if (c < 1) throw ConfigError("sweep counts must be >= 1");
  spec.validate();
  const auto suite = env::holdout_suite(base.env_id, spec.holdout_hi, spec.holdout_lo);

  SweepResult result;
  for (int count : counts) {
    SweepRow row;
    row.count = count;
    std::vector<double> grids, holdouts;
    for (std::uint64_t seed : seeds) {
      SweepCell cell;
      cell.count = count;
      cell.seed = seed;
      try {
        train::TrainConfig cfg = base;
        cfg.mode = train::Mode::Rap;
        cfg.n = count;
        cfg.seed = seed;
        const auto trained = train::train(cfg);
        cell.env_steps = trained.state.env_steps;
        const auto grid = transfer_grid(trained.state.agent, cfg.env_id, spec.mass_range, spec.friction_range,
                                        spec.grid_points, spec.n_rollouts, derive_seed(seed, "eval-grid"),
                                        cfg.horizon);
        const auto holdout = holdout_eval(trained.state.agent, cfg.env_id, suite, spec.n_rollouts,
                                          derive_seed(seed, "eval-holdout"), cfg.horizon);
        cell.grid_mean = grid.mean();
        cell.holdout_aggregate = holdout.aggregate;
        grids.push_back(cell.grid_mean);
        holdouts.push_back(cell.holdout_aggregate);
        row.env_steps.push_back(cell.env_steps);
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
        ++row.failed_seeds;
      }
      if (on_cell) on_cell(cell);
      result.cells.push_back(cell);
    }
    std::tie(row.grid_mean, row.grid_std) = mean_std(grids);
    std::tie(row.holdout_mean, row.holdout_std) = mean_std(holdouts);
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result, const std::string& comment) {
  std::string out = comment.empty() ? "" : "# " + comment + "\n";
  out += "count,grid_mean,grid_std,holdout_mean,holdout_std,env_steps_per_seed,failed_seeds\n";
  for (const auto& row : result.rows) {
    std::string steps;
    for (std::size_t i = 0; i < row.env_steps.size(); ++i) {
      if (i) steps += ';';
      steps += std::to_string(row.env_steps[i]);
    }
    out += join_csv({std::to_string(row.count), format_double(row.grid_mean), format_double(row.grid_std),
                     format_double(row.holdout_mean), format_double(row.holdout_std), steps,
                     std::to_string(row.failed_seeds)}) +
           "\n";
  }
  return out;
}

}  // namespace rap::eval

#include "rap/exp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rap/csv.hpp"
#include "rap/errors.hpp"
#include "rap/eval/reports.hpp"
#include "rap/eval/sweep.hpp"
#include "rap/exp/heatmap_svg.hpp"
#include "rap/nn/checkpoint.hpp"
#include "rap/train/trainer.hpp"

namespace rap::exp {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string seed_dir_name(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::string comment_for(const std::string& hash, std::uint64_t seed) {
  return "config_hash=" + hash + " seed=" + std::to_string(seed);
}

std::vector<std::string> seed_artifacts(const ExperimentConfig& cfg, std::uint64_t seed) {
  const std::string d = seed_dir_name(seed) + "/";
  std::vector<std::string> out{d + "checkpoints/agent.ckpt"};
  for (int i = 1; i <= cfg.train.adversary_count(); ++i)
    out.push_back(d + "checkpoints/adversary_" + std::to_string(i) + ".ckpt");
  for (const char* f : {"training_curve.csv", "train_log.csv", "holdout_suite.json", "transfer_grid.csv",
                        "transfer_grid.svg", "holdout.csv"})
    out.push_back(d + f);
  return out;
}

bool wants_swap(const ExperimentConfig& cfg) { return cfg.seeds.size() >= 2 && cfg.train.adversary_count() > 0; }

// Summary recomputed purely from the persisted per-seed CSVs.
std::string build_summary(const fs::path& run_dir, const std::vector<std::uint64_t>& seeds, const std::string& comment) {
  std::string out = "# " + comment + "\nseed,final_train_return,grid_mean,holdout_aggregate\n";
  std::vector<double> grids, holdouts;
  for (auto seed : seeds) {
    const auto dir = run_dir / seed_dir_name(seed);
    if (!fs::exists(dir / "transfer_grid.csv") || !fs::exists(dir / "holdout.csv")) continue;
    const auto grid = eval::grid_from_csv(read_text(dir / "transfer_grid.csv"));
    const auto holdout = eval::holdout_from_csv(read_text(dir / "holdout.csv"));
    std::string final_return = "NA";
    const auto curve = data_lines(read_text(dir / "training_curve.csv"));
    if (curve.size() > 1) final_return = split_csv(curve.back()).at(1);
    grids.push_back(grid.mean());
    holdouts.push_back(holdout.aggregate);
    out += join_csv({std::to_string(seed), final_return, format_double(grid.mean()), format_double(holdout.aggregate)}) +
           "\n";
  }
  auto stats = [](const std::vector<double>& xs) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(sq / static_cast<double>(xs.size()))};
  };
  if (!grids.empty()) {
    const auto [gm, gs] = stats(grids);
    const auto [hm, hs] = stats(holdouts);
    out += join_csv({"mean", "", format_double(gm), format_double(hm)}) + "\n";
    out += join_csv({"std", "", format_double(gs), format_double(hs)}) + "\n";
  }
  return out;
}

fs::path checkpoints_of(const fs::path& dir) {
  if (fs::exists(dir / "checkpoints" / "agent.ckpt")) return dir / "checkpoints";
  if (fs::exists(dir / "agent.ckpt")) return dir;
  throw IoError("no agent.ckpt under " + dir.string());
}

}  // namespace

std::vector<std::string> expected_artifacts(const ExperimentConfig& cfg) {
  std::vector<std::string> out{"config.json", "manifest.json", "summary.csv"};
  if (wants_swap(cfg)) out.push_back("swap_matrix.csv");
  for (auto seed : cfg.seeds) {
    auto s = seed_artifacts(cfg, seed);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  auto say = [&progress](const std::string& msg) {
    if (progress) progress(msg);
  };

  RunResult result;
  result.run_dir = resolve_output_dir(cfg);
  ensure_dir(result.run_dir);
  const auto hash = config_hash(cfg);
  write_text(result.run_dir / "config.json", canonical_config(cfg) + "\n");

  auto& manifest = result.manifest;
  manifest.config_hash = hash;
  manifest.master_seed = cfg.train.seed;
  manifest.tool_version = tool_version();
  manifest.mode = std::string(train::to_string(cfg.train.mode));
  manifest.started_at = utc_timestamp();
  manifest.seeds = cfg.seeds;
  manifest.artifacts = {"config.json"};

  const auto suite = env::holdout_suite(cfg.train.env_id, cfg.eval.holdout_hi, cfg.eval.holdout_lo);
  std::vector<nn::ActorCritic> agents;
  std::vector<std::vector<nn::ActorCritic>> adversaries;
  std::vector<std::string> labels;

  for (auto seed : cfg.seeds) {
    const auto stage = seed_dir_name(seed);
    const auto dir = result.run_dir / stage;
    const auto comment = comment_for(hash, seed);
    try {
      ensure_dir(dir);
      train::TrainConfig tcfg = cfg.train;
      tcfg.seed = seed;
      train::TrainOptions options;
      options.checkpoint_dir = dir / "checkpoints";
      options.on_iteration = [&](const train::IterationStats& s) {
        std::ostringstream msg;
        msg << stage << " iter " << s.iteration << " mean_return " << s.mean_return;
        say(msg.str());
      };
      auto trained = train::train(tcfg, options);
      for (const auto& p : trained.checkpoints)
        manifest.checkpoints[stage].push_back(fs::relative(p, result.run_dir).generic_string());

      write_text(dir / "training_curve.csv", train::curve_csv(trained.curve, tcfg.adversary_count()));
      write_text(dir / "train_log.csv", train::train_log_csv(trained.curve));
      write_text(dir / "holdout_suite.json", env::suite_to_text(suite) + "\n");

      say(stage + " evaluating transfer grid");
      const auto grid = eval::transfer_grid(trained.state.agent, tcfg.env_id, cfg.eval.mass_range,
                                            cfg.eval.friction_range, cfg.eval.grid_points, cfg.eval.n_rollouts,
                                            derive_seed(seed, "eval-grid"), tcfg.horizon);
      write_text(dir / "transfer_grid.csv", eval::grid_to_csv(grid, comment));
      emit_heatmap_svg(grid, dir / "transfer_grid.svg", std::string(train::to_string(tcfg.mode)) + " " + stage);

      say(stage + " evaluating holdout suite");
      const auto holdout = eval::holdout_eval(trained.state.agent, tcfg.env_id, suite, cfg.eval.n_rollouts,
                                              derive_seed(seed, "eval-holdout"), tcfg.horizon);
      write_text(dir / "holdout.csv", eval::holdout_to_csv(holdout, comment));

      for (const auto& rel : seed_artifacts(cfg, seed))
        if (rel.find("/checkpoints/") == std::string::npos) manifest.artifacts.push_back(rel);

      agents.push_back(trained.state.agent);
      adversaries.push_back(trained.state.adversaries);
      labels.push_back(stage);
    } catch (const std::exception& e) {
      result.failures.push_back(stage + ": " + e.what());
      say(result.failures.back());
    }
  }

  if (wants_swap(cfg)) {
    try {
      if (agents.size() < 2) throw std::runtime_error("fewer than two seeds trained successfully");
      say("evaluating swap matrix");
      const auto swap = eval::swap_matrix(agents, adversaries, labels, cfg.train.env_id, cfg.train.alpha,
                                          cfg.eval.n_rollouts, derive_seed(cfg.train.seed, "eval-swap"),
                                          cfg.train.horizon);
      write_text(result.run_dir / "swap_matrix.csv",
                 eval::swap_to_csv(swap, comment_for(hash, cfg.train.seed) + " alpha=" + format_double(cfg.train.alpha)));
      manifest.artifacts.push_back("swap_matrix.csv");
    } catch (const std::exception& e) {
      result.failures.push_back(std::string("swap_matrix: ") + e.what());
    }
  }

  write_text(result.run_dir / "summary.csv", build_summary(result.run_dir, cfg.seeds, comment_for(hash, cfg.train.seed)));
  manifest.artifacts.push_back("summary.csv");
  manifest.artifacts.push_back("manifest.json");
  manifest.failures = result.failures;
  manifest.finished_at = utc_timestamp();
  write_manifest(result.run_dir, manifest);
  result.exit_code = result.failures.empty() ? 0 : 2;
  return result;
}

fs::path find_config(const fs::path& dir) {
  fs::path cur = fs::absolute(dir);
  for (int i = 0; i < 4 && !cur.empty(); ++i) {
    if (fs::exists(cur / "config.json")) return cur / "config.json";
    if (cur == cur.parent_path()) break;
    cur = cur.parent_path();
  }
  throw ConfigError("no config.json found at or above " + dir.string());
}

std::vector<fs::path> evaluate_checkpoint(const EvalRequest& request) {
  const auto cfg = load_config(find_config(request.checkpoint_dir));
  const auto ckpt = nn::load_checkpoint(checkpoints_of(request.checkpoint_dir) / "agent.ckpt");
  const auto out_dir = request.out_dir.empty() ? request.checkpoint_dir : request.out_dir;
  ensure_dir(out_dir);
  const auto comment = comment_for(config_hash(cfg), ckpt.seed);
  std::vector<fs::path> written;
  if (request.grid) {
    const auto grid = eval::transfer_grid(ckpt.model, cfg.train.env_id, cfg.eval.mass_range, cfg.eval.friction_range,
                                          cfg.eval.grid_points, cfg.eval.n_rollouts, derive_seed(ckpt.seed, "eval-grid"),
                                          cfg.train.horizon);
    write_text(out_dir / "transfer_grid.csv", eval::grid_to_csv(grid, comment));
    emit_heatmap_svg(grid, out_dir / "transfer_grid.svg",
                     std::string(train::to_string(cfg.train.mode)) + " " + seed_dir_name(ckpt.seed));
    written.push_back(out_dir / "transfer_grid.csv");
    written.push_back(out_dir / "transfer_grid.svg");
  }
  if (request.holdout) {
    const auto suite = env::holdout_suite(cfg.train.env_id, cfg.eval.holdout_hi, cfg.eval.holdout_lo);
    const auto holdout = eval::holdout_eval(ckpt.model, cfg.train.env_id, suite, cfg.eval.n_rollouts,
                                            derive_seed(ckpt.seed, "eval-holdout"), cfg.train.horizon);
    write_text(out_dir / "holdout.csv", eval::holdout_to_csv(holdout, comment));
    written.push_back(out_dir / "holdout.csv");
  }
  return written;
}

fs::path swap_runs(std::span<const fs::path> runs, const fs::path& out_dir) {
  std::vector<fs::path> seed_dirs;
  for (const auto& run : runs) {
    std::vector<fs::path> children;
    if (fs::is_directory(run))
      for (const auto& entry : fs::directory_iterator(run))
        if (entry.is_directory() && entry.path().filename().string().rfind("seed_", 0) == 0)
          children.push_back(entry.path());
    std::sort(children.begin(), children.end());
    if (children.empty())
      seed_dirs.push_back(run);
    else
      seed_dirs.insert(seed_dirs.end(), children.begin(), children.end());
  }
  if (seed_dirs.empty()) throw ConfigError("swap: no runs given");

  const auto cfg = load_config(find_config(seed_dirs.front()));
  std::vector<nn::ActorCritic> agents;
  std::vector<std::vector<nn::ActorCritic>> adversaries;
  std::vector<std::string> labels;
  for (const auto& dir : seed_dirs) {
    const auto ckpt_dir = checkpoints_of(dir);
    auto pop = train::load_population(ckpt_dir);
    labels.push_back(seed_dir_name(nn::load_checkpoint(ckpt_dir / "agent.ckpt").seed));
    agents.push_back(std::move(pop.agent));
    adversaries.push_back(std::move(pop.adversaries));
  }
  const auto swap = eval::swap_matrix(agents, adversaries, labels, cfg.train.env_id, cfg.train.alpha,
                                      cfg.eval.n_rollouts, derive_seed(cfg.train.seed, "eval-swap"), cfg.train.horizon);
  ensure_dir(out_dir);
  const auto path = out_dir / "swap_matrix.csv";
  write_text(path, eval::swap_to_csv(swap, comment_for(config_hash(cfg), cfg.train.seed) +
                                               " alpha=" + format_double(cfg.train.alpha)));
  return path;
}

fs::path run_sweep(const ExperimentConfig& cfg, std::span<const int> counts, const ProgressFn& progress) {
  cfg.validate();
  const auto run_dir = resolve_output_dir(cfg);
  ensure_dir(run_dir);
  write_text(run_dir / "config.json", canonical_config(cfg) + "\n");
  const auto result = eval::adversary_count_sweep(cfg.train, counts, cfg.seeds, cfg.eval, [&](const eval::SweepCell& c) {
    if (!progress) return;
    std::ostringstream msg;
    msg << "count " << c.count << " seed " << c.seed;
    if (c.failed)
      msg << " failed: " << c.error;
    else
      msg << " grid_mean " << c.grid_mean << " holdout " << c.holdout_aggregate;
    progress(msg.str());
  });
  const auto path = run_dir / "sweep.csv";
  write_text(path, eval::sweep_to_csv(result, comment_for(config_hash(cfg), cfg.train.seed)));
  for (const auto& c : result.cells)
    if (c.failed) throw std::runtime_error("sweep cell count=" + std::to_string(c.count) + " seed=" +
                                           std::to_string(c.seed) + " failed: " + c.error);
  return path;
}

std::vector<fs::path> regenerate_report(const fs::path& run_dir) {
  const auto cfg = load_config(run_dir / "config.json");
  std::vector<fs::path> written;
  for (auto seed : cfg.seeds) {
    const auto dir = run_dir / seed_dir_name(seed);
    if (!fs::exists(dir / "transfer_grid.csv")) continue;
    const auto grid = eval::grid_from_csv(read_text(dir / "transfer_grid.csv"));
    emit_heatmap_svg(grid, dir / "transfer_grid.svg",
                     std::string(train::to_string(cfg.train.mode)) + " " + seed_dir_name(seed));
    written.push_back(dir / "transfer_grid.svg");
  }
  write_text(run_dir / "summary.csv", build_summary(run_dir, cfg.seeds, comment_for(config_hash(cfg), cfg.train.seed)));
  written.push_back(run_dir / "summary.csv");
  return written;
}

}  // namespace rap::exp

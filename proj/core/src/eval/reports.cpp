#include "rap/eval/reports.hpp"

#include <algorithm>
#include <limits>

#include "rap/csv.hpp"
#include "rap/errors.hpp"

namespace rap::eval {
namespace {

std::string cell_text(const EvalScore& s) { return format_double(s.mean) + ";" + format_double(s.std); }

EvalScore parse_cell(const std::string& text, int n_rollouts) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw ConfigError("malformed cell '" + text + "' (expected mean;std)");
  return {parse_double(std::string_view(text).substr(0, semi)), parse_double(std::string_view(text).substr(semi + 1)),
          n_rollouts};
}

std::string comment_line(const std::string& comment) { return comment.empty() ? "" : "# " + comment + "\n"; }

}  // namespace

double TransferGrid::mean() const {
  double sum = 0.0;
  int count = 0;
  for (std::size_t m = 0; m < scores.size(); ++m)
    for (std::size_t f = 0; f < scores[m].size(); ++f) {
      if (!failures.empty() && !failures[m][f].empty()) continue;
      sum += scores[m][f].mean;
      ++count;
    }
  return count ? sum / count : 0.0;
}

double TransferGrid::min_mean() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& row : scores)
    for (const auto& s : row) v = std::min(v, s.mean);
  return v;
}

double TransferGrid::max_mean() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& row : scores)
    for (const auto& s : row) v = std::max(v, s.mean);
  return v;
}

std::vector<double> linspace(env::Interval range, int n) {
  if (n < 1) throw ConfigError("linspace needs at least one point");
  if (n == 1) return {range.lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = range.lo + (range.hi - range.lo) * static_cast<double>(i) / (n - 1);
  out.back() = range.hi;
  return out;
}

TransferGrid transfer_grid(const nn::ActorCritic& agent, env::EnvId env_id, env::Interval mass_range,
                           env::Interval friction_range, int grid_points, int n_rollouts, std::uint64_t seed,
                           int horizon) {
  if (grid_points < 2) throw ConfigError("transfer_grid needs grid_points >= 2");
  env::DomainSpec{mass_range, {friction_range}}.validate();
  TransferGrid grid;
  grid.mass_values = linspace(mass_range, grid_points);
  grid.friction_values = linspace(friction_range, grid_points);
  const auto rows = grid.mass_values.size();
  const auto cols = grid.friction_values.size();
  grid.scores.assign(rows, std::vector<EvalScore>(cols));
  grid.failures.assign(rows, std::vector<std::string>(cols));
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t f = 0; f < cols; ++f) {
      try {
        const auto params = env::DynamicsParams::uniform(env_id, grid.mass_values[m], grid.friction_values[f]);
        grid.scores[m][f] = evaluate(agent, env_id, params, n_rollouts, seed, horizon);
      } catch (const std::exception& e) {
        grid.failures[m][f] = e.what();
      }
    }
  return grid;
}

double SwapMatrix::relative_degradation() const {
  const std::size_t s = size();
  if (s < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < s; ++j)
      if (j != i) off += scores[i][j].mean;
    off /= static_cast<double>(s - 1);
    const double diag = scores[i][i].mean;
    total += (diag - off) / std::max(std::abs(diag), 1e-12);
  }
  return total / static_cast<double>(s);
}

SwapMatrix swap_matrix(std::span<const nn::ActorCritic> agents,
                       std::span<const std::vector<nn::ActorCritic>> adversary_sets, std::vector<std::string> labels,
                       env::EnvId env_id, double alpha, int n_rollouts, std::uint64_t seed, int horizon) {
  const std::size_t s = agents.size();
  if (s == 0) throw ConfigError("swap_matrix needs at least one run");
  if (adversary_sets.size() != s || labels.size() != s)
    throw ConfigError("swap_matrix: agents, adversary sets and labels must have equal length");
  const std::size_t n = adversary_sets.front().size();
  if (n == 0) throw ConfigError("swap_matrix: runs have no adversaries");
  for (const auto& set : adversary_sets)
    if (set.size() != n) throw ConfigError("swap_matrix: runs have different population sizes");

  SwapMatrix out;
  out.labels = std::move(labels);
  out.alpha = alpha;
  out.scores.assign(s, std::vector<EvalScore>(s));
  const auto params = env::DynamicsParams::nominal(env_id);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) {
      std::vector<double> pooled;
      for (const auto& adversary : adversary_sets[b]) {
        const auto r = episode_returns(agents[a], env_id, params, n_rollouts, seed, horizon, &adversary, alpha);
        pooled.insert(pooled.end(), r.begin(), r.end());
      }
      out.scores[a][b] = EvalScore::from_returns(pooled);
    }
  return out;
}

HoldoutReport holdout_eval(const nn::ActorCritic& agent, env::EnvId env_id, std::span<const env::NamedParams> suite,
                           int n_rollouts, std::uint64_t seed, int horizon) {
  if (suite.empty()) throw ConfigError("holdout_eval: empty suite");
  HoldoutReport report;
  double sum = 0.0;
  for (const auto& test : suite) {
    report.tests.emplace_back(test.name, evaluate(agent, env_id, test.params, n_rollouts, seed, horizon));
    sum += report.tests.back().second.mean;
  }
  report.aggregate = sum / static_cast<double>(suite.size());
  return report;
}

std::string grid_to_csv(const TransferGrid& grid, const std::string& comment) {
  std::string out = comment_line(comment);
  std::vector<std::string> header{"mass\\friction"};
  for (double f : grid.friction_values) header.push_back(format_double(f));
  out += join_csv(header) + "\n";
  for (std::size_t m = 0; m < grid.mass_values.size(); ++m) {
    std::vector<std::string> row{format_double(grid.mass_values[m])};
    for (std::size_t f = 0; f < grid.friction_values.size(); ++f) {
      const bool failed = !grid.failures.empty() && !grid.failures[m][f].empty();
      row.push_back(failed ? "failed" : cell_text(grid.scores[m][f]));
    }
    out += join_csv(row) + "\n";
  }
  return out;
}

TransferGrid grid_from_csv(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.size() < 2) throw ConfigError("grid CSV needs a header and at least one row");
  TransferGrid grid;
  const auto header = split_csv(lines[0]);
  for (std::size_t i = 1; i < header.size(); ++i) grid.friction_values.push_back(parse_double(header[i]));
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_csv(lines[l]);
    if (fields.size() != header.size()) throw ConfigError("grid CSV row has the wrong number of fields");
    grid.mass_values.push_back(parse_double(fields[0]));
    std::vector<EvalScore> row;
    std::vector<std::string> fails;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "failed") {
        row.push_back({});
        fails.emplace_back("failed");
      } else {
        row.push_back(parse_cell(fields[i], 0));
        fails.emplace_back();
      }
    }
    grid.scores.push_back(std::move(row));
    grid.failures.push_back(std::move(fails));
  }
  return grid;
}

std::string swap_to_csv(const SwapMatrix& swap, const std::string& comment) {
  std::string out = comment_line(comment);
  std::vector<std::string> header{"agent\\adversary"};
  header.insert(header.end(), swap.labels.begin(), swap.labels.end());
  out += join_csv(header) + "\n";
  for (std::size_t a = 0; a < swap.size(); ++a) {
    std::vector<std::string> row{swap.labels[a]};
    for (const auto& cell : swap.scores[a]) row.push_back(cell_text(cell));
    out += join_csv(row) + "\n";
  }
  return out;
}

SwapMatrix swap_from_csv(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.empty()) throw ConfigError("swap CSV is empty");
  SwapMatrix swap;
  const auto header = split_csv(lines[0]);
  swap.labels.assign(header.begin() + 1, header.end());
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_csv(lines[l]);
    if (fields.size() != header.size()) throw ConfigError("swap CSV row has the wrong number of fields");
    std::vector<EvalScore> row;
    for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(parse_cell(fields[i], 0));
    swap.scores.push_back(std::move(row));
  }
  if (swap.scores.size() != swap.labels.size()) throw ConfigError("swap CSV is not square");
  return swap;
}

std::string holdout_to_csv(const HoldoutReport& report, const std::string& comment) {
  std::string out = comment_line(comment) + "test,mean,std\n";
  for (const auto& [name, score] : report.tests)
    out += join_csv({name, format_double(score.mean), format_double(score.std)}) + "\n";
  out += "aggregate," + format_double(report.aggregate) + ",\n";
  return out;
}

HoldoutReport holdout_from_csv(std::string_view text) {
  const auto lines = data_lines(text);
  HoldoutReport report;
  bool has_aggregate = false;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_csv(lines[l]);
    if (fields.size() != 3) throw ConfigError("holdout CSV row must have 3 fields");
    if (fields[0] == "aggregate") {
      report.aggregate = parse_double(fields[1]);
      has_aggregate = true;
    } else {
      report.tests.emplace_back(fields[0], EvalScore{parse_double(fields[1]), parse_double(fields[2]), 0});
    }
  }
  if (!has_aggregate) throw ConfigError("holdout CSV lacks the aggregate row");
  return report;
}

}  // namespace rap::eval

#include "rap/exp/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rap/errors.hpp"
#include "rap/exp/experiment_config.hpp"

#ifndef RAP_VERSION
#define RAP_VERSION "0.0.0"
#endif

namespace rap::exp {

using nlohmann::json;

std::string tool_version() { return std::string("rap-lab ") + RAP_VERSION; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::filesystem::path& run_dir, const RunManifest& m) {
  json j;
  j["config_hash"] = m.config_hash;
  j["master_seed"] = m.master_seed;
  j["tool_version"] = m.tool_version;
  j["mode"] = m.mode;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["seeds"] = m.seeds;
  j["checkpoints"] = m.checkpoints;
  j["artifacts"] = m.artifacts;
  j["failures"] = m.failures;
  const auto path = run_dir / "manifest.json";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing manifest " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed manifest " + path.string() + ": " + e.what());
  }
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.mode = j.value("mode", "");
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  m.checkpoints = j.at("checkpoints").get<std::map<std::string, std::vector<std::string>>>();
  m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  m.failures = j.value("failures", std::vector<std::string>{});
  return m;
}

bool verify_manifest(const std::filesystem::path& run_dir) {
  const auto manifest = read_manifest(run_dir);
  try {
    return config_hash(load_config(run_dir / "config.json")) == manifest.config_hash;
  } catch (const ConfigError&) {
    return false;
  }
}

}  // namespace rap::exp

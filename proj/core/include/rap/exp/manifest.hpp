#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rap::exp {

struct RunManifest {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string tool_version;
  std::string mode;
  std::string started_at;
  std::string finished_at;
  std::vector<std::uint64_t> seeds;
  /// Stage ("seed_<k>") -> checkpoint files, relative to the run directory.
  std::map<std::string, std::vector<std::string>> checkpoints;
  /// Every other artifact, relative to the run directory.
  std::vector<std::string> artifacts;
  std::vector<std::string> failures;
};

std::string tool_version();
/// UTC, ISO-8601.
std::string utc_timestamp();

/// Writes <run_dir>/manifest.json. IoError if the directory is not writable.
void write_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& run_dir);

/// Re-hashes <run_dir>/config.json and compares with the manifest's hash.
bool verify_manifest(const std::filesystem::path& run_dir);

}  // namespace rap::exp

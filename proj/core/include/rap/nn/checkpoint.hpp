#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "rap/nn/policy.hpp"

namespace rap::nn {

struct Checkpoint {
  ActorCritic model;
  std::uint64_t seed = 0;
};

// Binary, little-endian, self-describing:
//   "RAPCKPT1" | u64 seed | u32 n_nets
//   per net: u32 name_len, name, u32 n_layers,
//            per layer: u32 out, u32 in, f64[out*in] weight (row-major), f64[out] bias
//            u32 log_std_len, f64[log_std_len]
// Nets are "policy" then "value".

std::string encode_checkpoint(const ActorCritic& model, std::uint64_t seed);
Checkpoint decode_checkpoint(const std::string& bytes);

/// Writes via a temporary file and rename so a reader never sees a partial file.
void save_checkpoint(const std::filesystem::path& path, const ActorCritic& model,
                     std::uint64_t seed);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rap::nn

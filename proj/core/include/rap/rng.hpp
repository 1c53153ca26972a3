#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace rap {

using Rng = std::mt19937_64;

/// Derives an independent generator from a master seed, a purpose tag and
/// an index path, e.g. derive_stream(seed, "rollout", {iteration, k}).
/// Streams depend only on their key, never on how many draws other streams made.
Rng derive_stream(std::uint64_t master_seed, std::string_view purpose,
                  std::initializer_list<std::uint64_t> indices = {});

/// Same derivation, returned as a plain 64-bit seed (for APIs taking a seed).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view purpose,
                          std::initializer_list<std::uint64_t> indices = {});

}  // namespace rap

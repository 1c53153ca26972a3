#include "rap/rng.hpp"

#include <vector>

namespace rap {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void push_u64(std::vector<std::uint32_t>& words, std::uint64_t v) {
  words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
  words.push_back(static_cast<std::uint32_t>(v >> 32));
}

}  // namespace

Rng derive_stream(std::uint64_t master_seed, std::string_view purpose,
                  std::initializer_list<std::uint64_t> indices) {
  std::vector<std::uint32_t> words;
  words.reserve(4 + 2 * indices.size());
  push_u64(words, master_seed);
  push_u64(words, fnv1a(purpose));
  for (auto i : indices) push_u64(words, i);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view purpose,
                          std::initializer_list<std::uint64_t> indices) {
  return derive_stream(master_seed, purpose, indices)();
}

}  // namespace rap

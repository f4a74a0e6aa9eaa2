#include "bts/random.hpp"

#include <array>

namespace bts {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint32_t> words) {
  std::seed_seq seq(words);
  return std::mt19937_64(seq);
}

std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seeded_engine({lo(seed), hi(seed)})) {}

// The 0x5eed tag keeps split streams disjoint from the single-seed constructor.
RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t replication)
    : engine_(seeded_engine({lo(master_seed), hi(master_seed), lo(replication), hi(replication), 0x5eedu})) {}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

}  // namespace bts

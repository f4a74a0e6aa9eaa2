#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bts {

/// Raised when a caller breaks an operation's precondition (bad arm index,
/// non-monotone time, NaN sample).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by the config loader and by validation of user-supplied specs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A per-episode invariant failed. Carries what is needed to replay the run.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::uint64_t seed, std::uint64_t replication, const std::string& what)
      : std::runtime_error("invariant violated (seed=" + std::to_string(seed) +
                           ", replication=" + std::to_string(replication) + "): " + what),
        seed_(seed),
        replication_(replication) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replication() const noexcept { return replication_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replication_;
};

}  // namespace bts

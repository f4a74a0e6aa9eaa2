#pragma once

#include <cstdint>
#include <random>

namespace bts {

/// Private random stream of one episode.
///
/// Stream r of a Monte Carlo run is seeded from (master_seed, r) alone, so a
/// replication draws the same numbers no matter which thread executes it or in
/// which order replications are scheduled.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t master_seed, std::uint64_t replication);

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bts

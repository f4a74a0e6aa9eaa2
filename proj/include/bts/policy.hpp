#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "bts/random.hpp"

namespace bts {

/// Which rewards feed the posterior.
enum class Variant {
  skip,  // only rewards at cycle starts and cycle ends
  full,  // every observed reward
};

enum class PolicyMode {
  batched,    // rewards revealed at adaptive batch ends
  classical,  // rewards revealed after every step
};

std::string_view to_string(Variant v);
std::string_view to_string(PolicyMode m);

struct PolicyConfig {
  PolicyMode mode = PolicyMode::batched;
  double alpha = 2.0;
  double sigma2 = 1.0;
  Variant variant = Variant::full;

  /// Throws ConfigError if alpha <= 1 (batched) or sigma2 <= 0.
  void validate() const;
  /// alpha <= 5 sigma^2 / 4, the regime covered by the regret guarantee.
  bool theory_regime() const noexcept { return alpha <= 1.25 * sigma2; }
};

/// Gaussian Thompson posterior whose parameters only move at commit time.
///
/// Arm i is sampled from N(sum_i / (1 + count_i), sigma2 / (1 + count_i)) using
/// the frozen statistics. Rewards noted during a batch go to pending
/// statistics and become visible at the next commit.
class PosteriorState {
 public:
  PosteriorState(std::size_t num_arms, double sigma2, Variant variant);

  std::size_t num_arms() const noexcept { return frozen_count_.size(); }
  Variant variant() const noexcept { return variant_; }
  double sigma2() const noexcept { return sigma2_; }

  double posterior_mean(std::size_t arm) const;
  double posterior_variance(std::size_t arm) const;

  /// Draws one θ per arm into `out` (resized to K).
  void sample_thetas(RandomStream& rng, std::vector<double>& out) const;
  std::vector<double> sample_thetas(RandomStream& rng) const;

  void note_action(std::size_t arm, double reward, bool is_cycle_boundary);
  void commit_batch();

  const std::vector<std::int64_t>& frozen_count() const noexcept { return frozen_count_; }
  const std::vector<double>& frozen_sum() const noexcept { return frozen_sum_; }
  const std::vector<std::int64_t>& pending_count() const noexcept { return pending_count_; }
  const std::vector<double>& pending_sum() const noexcept { return pending_sum_; }

 private:
  double sigma2_;
  Variant variant_;
  std::vector<std::int64_t> frozen_count_;
  std::vector<double> frozen_sum_;
  std::vector<std::int64_t> pending_count_;
  std::vector<double> pending_sum_;
};

/// Lowest index attaining the maximum. NaN entries are a contract violation.
std::size_t select_action(std::span<const double> thetas);

}  // namespace bts

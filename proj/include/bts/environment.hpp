#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bts/random.hpp"

namespace bts {

enum class ArmKind { bernoulli, gaussian };

/// Reward distribution of one arm. Construct through the named factories,
/// which validate parameters.
class ArmSpec {
 public:
  static ArmSpec bernoulli(double p);
  static ArmSpec gaussian(double mean, double variance);

  ArmKind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  /// Bernoulli success probability; equals mean() for Bernoulli arms.
  double p() const noexcept { return mean_; }
  /// True iff every reward lies in [0, 1].
  bool bounded() const noexcept { return kind_ == ArmKind::bernoulli; }

  std::string describe() const;

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;

 private:
  ArmSpec(ArmKind kind, double mean, double variance) : kind_(kind), mean_(mean), variance_(variance) {}

  ArmKind kind_;
  double mean_;
  double variance_;
};

double draw_reward(const ArmSpec& arm, RandomStream& rng);

/// Ordered set of K >= 2 arms with its ground-truth summary. Arms are indexed
/// from 0 internally; CSV output and the CLI use the same 0-based indices.
class EnvironmentSpec {
 public:
  explicit EnvironmentSpec(std::vector<ArmSpec> arms);

  std::size_t num_arms() const noexcept { return arms_.size(); }
  const std::vector<ArmSpec>& arms() const noexcept { return arms_; }
  const ArmSpec& arm(std::size_t i) const { return arms_.at(i); }

  const std::vector<double>& means() const noexcept { return means_; }
  /// Lowest index attaining the maximal mean.
  std::size_t best_arm() const noexcept { return best_; }
  const std::vector<double>& gaps() const noexcept { return gaps_; }
  bool bounded() const noexcept { return bounded_; }

 private:
  std::vector<ArmSpec> arms_;
  std::vector<double> means_;
  std::vector<double> gaps_;
  std::size_t best_ = 0;
  bool bounded_ = true;
};

/// Δ_i = max_j μ_j − μ_i. Tied maximizers all get exactly 0.
std::vector<double> gaps(const EnvironmentSpec& env);

}  // namespace bts

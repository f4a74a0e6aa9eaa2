#include "bts/policy.hpp"

#include <cmath>
#include <string>

#include "bts/error.hpp"

namespace bts {

std::string_view to_string(Variant v) { return v == Variant::skip ? "skip" : "full"; }

std::string_view to_string(PolicyMode m) { return m == PolicyMode::batched ? "batched_ts" : "classical_ts"; }

void PolicyConfig::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ConfigError("sigma2 must be positive");
  }
  if (mode == PolicyMode::batched && !(alpha > 1.0 && std::isfinite(alpha))) {
    throw ConfigError("alpha must exceed 1");
  }
}

PosteriorState::PosteriorState(std::size_t num_arms, double sigma2, Variant variant)
    : sigma2_(sigma2),
      variant_(variant),
      frozen_count_(num_arms, 0),
      frozen_sum_(num_arms, 0.0),
      pending_count_(num_arms, 0),
      pending_sum_(num_arms, 0.0) {
  if (!(sigma2 > 0.0)) {
    throw ContractViolation("posterior variance scale must be positive");
  }
}

double PosteriorState::posterior_mean(std::size_t arm) const {
  return frozen_sum_.at(arm) / (1.0 + static_cast<double>(frozen_count_.at(arm)));
}

double PosteriorState::posterior_variance(std::size_t arm) const {
  return sigma2_ / (1.0 + static_cast<double>(frozen_count_.at(arm)));
}

void PosteriorState::sample_thetas(RandomStream& rng, std::vector<double>& out) const {
  out.resize(num_arms());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double denom = 1.0 + static_cast<double>(frozen_count_[i]);
    out[i] = frozen_sum_[i] / denom + std::sqrt(sigma2_ / denom) * rng.normal();
  }
}

std::vector<double> PosteriorState::sample_thetas(RandomStream& rng) const {
  std::vector<double> out;
  sample_thetas(rng, out);
  return out;
}

void PosteriorState::note_action(std::size_t arm, double reward, bool is_cycle_boundary) {
  if (arm >= num_arms()) {
    throw ContractViolation("note_action: arm " + std::to_string(arm) + " out of range");
  }
  if (variant_ == Variant::skip && !is_cycle_boundary) {
    return;
  }
  ++pending_count_[arm];
  pending_sum_[arm] += reward;
}

void PosteriorState::commit_batch() {
  for (std::size_t i = 0; i < num_arms(); ++i) {
    frozen_count_[i] += pending_count_[i];
    frozen_sum_[i] += pending_sum_[i];
    pending_count_[i] = 0;
    pending_sum_[i] = 0.0;
  }
}

std::size_t select_action(std::span<const double> thetas) {
  if (thetas.empty()) {
    throw ContractViolation("select_action: no arms");
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (std::isnan(thetas[i])) {
      throw ContractViolation("select_action: NaN sample for arm " + std::to_string(i));
    }
    if (thetas[i] > thetas[best]) {
      best = i;
    }
  }
  return best;
}

}  // namespace bts

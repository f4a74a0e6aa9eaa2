#include "bts/environment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bts/error.hpp"

namespace bts {

ArmSpec ArmSpec::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("bernoulli probability must lie in [0, 1], got " + std::to_string(p));
  }
  return ArmSpec(ArmKind::bernoulli, p, p * (1.0 - p));
}

ArmSpec ArmSpec::gaussian(double mean, double variance) {
  if (!std::isfinite(mean)) {
    throw ConfigError("gaussian mean must be finite");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("gaussian variance must be positive, got " + std::to_string(variance));
  }
  return ArmSpec(ArmKind::gaussian, mean, variance);
}

std::string ArmSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == ArmKind::bernoulli) {
    os << "bernoulli(" << mean_ << ")";
  } else {
    os << "gaussian(" << mean_ << ", " << variance_ << ")";
  }
  return os.str();
}

double draw_reward(const ArmSpec& arm, RandomStream& rng) {
  switch (arm.kind()) {
    case ArmKind::bernoulli:
      return rng.uniform() < arm.p() ? 1.0 : 0.0;
    case ArmKind::gaussian:
      return arm.mean() + std::sqrt(arm.variance()) * rng.normal();
  }
  return 0.0;
}

EnvironmentSpec::EnvironmentSpec(std::vector<ArmSpec> arms) : arms_(std::move(arms)) {
  if (arms_.size() < 2) {
    throw ConfigError("an environment needs at least 2 arms, got " + std::to_string(arms_.size()));
  }
  means_.reserve(arms_.size());
  for (const auto& a : arms_) {
    means_.push_back(a.mean());
    bounded_ = bounded_ && a.bounded();
  }
  best_ = static_cast<std::size_t>(std::max_element(means_.begin(), means_.end()) - means_.begin());
  gaps_.reserve(arms_.size());
  for (double m : means_) {
    gaps_.push_back(means_[best_] - m);
  }
}

std::vector<double> gaps(const EnvironmentSpec& env) { return env.gaps(); }

}  // namespace bts

#include "bts/cycle_batch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bts/error.hpp"

namespace bts {

std::int64_t batch_limit(double alpha, std::int64_t m) {
  const double product = alpha * static_cast<double>(m);
  const double nearest = std::nearbyint(product);
  const double ulp = std::nextafter(std::fabs(product), INFINITY) - std::fabs(product);
  const double rounded = std::fabs(product - nearest) <= ulp ? nearest : std::ceil(product);
  auto limit = static_cast<std::int64_t>(rounded);
  // ceil(alpha * m) >= m + 1 whenever alpha > 1 and m >= 1; snapping must not undo that.
  if (alpha > 1.0 && limit <= m) {
    limit = m + 1;
  }
  return std::max<std::int64_t>(1, limit);
}

CycleBatchState::CycleBatchState(std::size_t num_arms)
    : m_(num_arms, 0), m_at_batch_end_(num_arms, 0), limits_(num_arms, 1) {
  if (num_arms < 2) {
    throw ContractViolation("cycle tracking needs at least 2 arms");
  }
}

CycleEvent CycleBatchState::record_action(std::int64_t t, std::size_t arm) {
  if (t != last_t_ + 1) {
    throw ContractViolation("record_action: expected t=" + std::to_string(last_t_ + 1) + ", got " +
                            std::to_string(t));
  }
  if (arm >= m_.size()) {
    throw ContractViolation("record_action: arm " + std::to_string(arm) + " out of range");
  }
  CycleEvent event;
  if (t == cycle_start_) {
    ++m_[arm];
    cycle_first_action_ = arm;
    event.boundary = true;
  } else if (arm != *last_action_) {
    ++m_[arm];
    ++completed_cycles_;
    event.boundary = true;
    event.closed = ClosedCycle{completed_cycles_, cycle_start_, t};
    cycle_start_ = t + 1;
  }
  last_action_ = arm;
  last_t_ = t;
  return event;
}

bool limits_reached(std::span<const std::int64_t> m, std::span<const std::int64_t> limits) {
  if (m.size() != limits.size()) {
    throw ContractViolation("limits_reached: size mismatch");
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == limits[i]) {
      return true;
    }
  }
  return false;
}

bool CycleBatchState::batch_should_end() const { return limits_reached(m_, limits_); }

const BatchSummary& CycleBatchState::end_batch(std::int64_t t, double alpha) {
  if (t != last_t_) {
    throw ContractViolation("end_batch: batch must end at the last recorded step");
  }
  BatchSummary summary;
  summary.index = batch_index();
  summary.end_time = t;
  summary.cycles_closed = completed_cycles_;
  summary.m = m_;
  m_at_batch_end_ = m_;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    limits_[i] = batch_limit(alpha, m_[i]);
  }
  batches_.push_back(std::move(summary));
  return batches_.back();
}

std::int64_t CycleBatchState::batch_count(std::int64_t horizon) const {
  std::int64_t before = 0;
  for (const auto& b : batches_) {
    if (b.end_time < horizon) {
      ++before;
    }
  }
  return before + 1;
}

std::vector<std::int64_t> CycleBatchState::batch_end_times() const {
  std::vector<std::int64_t> out;
  out.reserve(batches_.size());
  for (const auto& b : batches_) {
    out.push_back(b.end_time);
  }
  return out;
}

double batch_count_bound(std::size_t num_arms, double alpha, std::int64_t horizon) {
  const double k = static_cast<double>(num_arms);
  return 1.0 + k + k * std::log(static_cast<double>(horizon) / k) / std::log(alpha);
}

}  // namespace bts

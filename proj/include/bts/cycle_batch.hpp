#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bts {

/// A closed cycle [start, end] (1-based, inclusive).
struct ClosedCycle {
  std::int64_t index = 0;  // k, 1-based
  std::int64_t start = 0;
  std::int64_t end = 0;

  friend bool operator==(const ClosedCycle&, const ClosedCycle&) = default;
};

/// What recording one action did to the cycle structure.
struct CycleEvent {
  /// Step t is a cycle start or a cycle end, i.e. it counts toward M_{A_t}.
  bool boundary = false;
  std::optional<ClosedCycle> closed;
};

/// One completed batch: T_j and M(T_j).
struct BatchSummary {
  std::int64_t index = 0;  // j, 1-based
  std::int64_t end_time = 0;
  std::int64_t cycles_closed = 0;  // closed cycles in [1, T_j]
  std::vector<std::int64_t> m;
};

/// U = max{1, ceil(alpha * m)}. Products within one ulp of an integer snap to
/// that integer before the ceiling so that e.g. 2 * 4 gives 8 and never 9.
std::int64_t batch_limit(double alpha, std::int64_t m);

/// True iff some arm's cycle count equals its limit.
bool limits_reached(std::span<const std::int64_t> m, std::span<const std::int64_t> limits);

/// Cycle and batch bookkeeping driven by the action stream alone.
///
/// A cycle opens at C_b and closes at the first later step whose action
/// differs from the previous one. The per-arm cycle count M_i grows by one at
/// every cycle start and every cycle end played on arm i. A batch may only end
/// at a cycle end, and does so as soon as some M_i reaches its limit U_i for
/// the current batch.
class CycleBatchState {
 public:
  explicit CycleBatchState(std::size_t num_arms);

  std::size_t num_arms() const noexcept { return m_.size(); }

  /// Feed A_t. `t` must be one past the previous step; arms are 0-based.
  CycleEvent record_action(std::int64_t t, std::size_t arm);

  /// Batch-end predicate, evaluated right after a cycle closes: some M_i
  /// equals its current limit.
  bool batch_should_end() const;

  /// Close the current batch at step t and derive the next limits.
  const BatchSummary& end_batch(std::int64_t t, double alpha);

  /// B(T) = min{j : T <= T_j}; an unfinished batch counts once it has begun.
  std::int64_t batch_count(std::int64_t horizon) const;

  std::int64_t last_time() const noexcept { return last_t_; }
  std::int64_t current_cycle_start() const noexcept { return cycle_start_; }
  std::optional<std::size_t> last_action() const noexcept { return last_action_; }
  std::optional<std::size_t> cycle_first_action() const noexcept { return cycle_first_action_; }
  const std::vector<std::int64_t>& m() const noexcept { return m_; }
  const std::vector<std::int64_t>& m_at_last_batch_end() const noexcept { return m_at_batch_end_; }
  const std::vector<std::int64_t>& limits() const noexcept { return limits_; }
  const std::vector<BatchSummary>& batches() const noexcept { return batches_; }
  std::vector<std::int64_t> batch_end_times() const;
  /// Current batch j (1-based).
  std::int64_t batch_index() const noexcept { return static_cast<std::int64_t>(batches_.size()) + 1; }
  std::int64_t completed_cycles() const noexcept { return completed_cycles_; }
  /// True if the open cycle has had its start step recorded.
  bool cycle_open() const noexcept { return last_t_ >= cycle_start_; }

 private:
  std::vector<std::int64_t> m_;
  std::vector<std::int64_t> m_at_batch_end_;
  std::vector<std::int64_t> limits_;
  std::vector<BatchSummary> batches_;
  std::int64_t cycle_start_ = 1;
  std::int64_t last_t_ = 0;
  std::int64_t completed_cycles_ = 0;
  std::optional<std::size_t> last_action_;
  std::optional<std::size_t> cycle_first_action_;
};

/// Right-hand side of the deterministic batch bound 1 + K + K log_alpha(T/K).
double batch_count_bound(std::size_t num_arms, double alpha, std::int64_t horizon);

}  // namespace bts

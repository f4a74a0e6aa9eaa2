#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bts/cycle_batch.hpp"
#include "bts/environment.hpp"
#include "bts/policy.hpp"

namespace bts {

struct RunConfig {
  EnvironmentSpec environment;
  PolicyConfig policy;
  std::int64_t horizon = 2;
  std::int64_t replications = 1;
  std::uint64_t master_seed = 0;
  std::int64_t trace_stride = 1;

  void validate() const;
};

/// One recorded row of an episode trace.
struct TracePoint {
  std::int64_t t = 0;
  std::size_t action = 0;
  double pseudo_regret = 0.0;  // Σ_{s<=t} Δ_{A_s}
  std::int64_t batch_index = 0;  // B(t)

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunTrace {
  std::uint64_t seed = 0;
  std::int64_t replication = 0;
  std::int64_t horizon = 0;
  /// Rows at multiples of the trace stride, plus t = T.
  std::vector<TracePoint> points;
  /// Every action A_1..A_T (0-based arms); only filled when requested.
  std::vector<std::size_t> actions;
  std::vector<std::int64_t> pulls;  // N_i(T)
  std::vector<std::int64_t> m_at_last_batch_end;
  std::vector<std::int64_t> m_final;  // M_i(T)
  std::int64_t batches = 0;  // B(T); equals T for classical TS
  std::int64_t cycles = 0;   // closed cycles
  std::vector<BatchSummary> batch_summaries;
  double final_regret = 0.0;
};

/// Everything an observer may inspect after step t has been played and
/// recorded, but before any batch end or commit at t.
struct StepView {
  std::int64_t t;
  std::size_t arm;
  double reward;
  const CycleEvent& cycle;
  std::span<const double> thetas;
  /// Policy posterior; its frozen part is what step t sampled from.
  const PosteriorState& posterior;
  /// Cycle-boundary statistics S_i, M_i frozen at the last batch end,
  /// tracked for every policy regardless of its variant.
  const PosteriorState& boundary_stats;
  const CycleBatchState& schedule;
};

using StepObserver = std::function<void(const StepView&)>;

struct EpisodeOptions {
  bool keep_actions = false;
  StepObserver observer;
};

/// Plays T steps of the configured policy. The result depends only on
/// (config, replication). Throws InvariantViolation when a per-episode check
/// fails; for batched runs this includes the deterministic batch bound.
RunTrace run_episode(const RunConfig& config, std::int64_t replication, const EpisodeOptions& options = {});

struct AggregateResult {
  PolicyConfig policy;
  std::int64_t horizon = 0;
  std::int64_t replications = 0;
  std::vector<std::int64_t> curve_t;
  std::vector<double> mean_regret;
  std::vector<double> stderr_regret;
  double mean_final_regret = 0.0;
  double stderr_final_regret = 0.0;
  double mean_batches = 0.0;
  std::int64_t max_batches = 0;
  double mean_cycles = 0.0;
  std::vector<double> mean_pulls;
};

/// Mean and standard error (sample std / sqrt(n)); stderr is 0 when n == 1.
struct MeanStderr {
  double mean = 0.0;
  double standard_error = 0.0;
};
MeanStderr mean_stderr(std::span<const double> values);

/// Runs every replication (in parallel when threads != 1) and merges in
/// replication order, so the result does not depend on the thread count.
AggregateResult run_monte_carlo(const RunConfig& config, unsigned threads = 1);

/// Folds already-computed traces, in the given order.
AggregateResult aggregate(const RunConfig& config, std::span<const RunTrace> traces);

/// Cumulative pseudo-regret Σ_{s<=t} Δ_{A_s} for every t.
std::vector<double> regret_curve(std::span<const std::size_t> actions, const EnvironmentSpec& env);
std::vector<double> regret_curve(const RunTrace& trace, const EnvironmentSpec& env);

}  // namespace bts

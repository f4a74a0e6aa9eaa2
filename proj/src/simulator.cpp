#include "bts/simulator.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bts/error.hpp"
#include "bts/parallel.hpp"

namespace bts {

void RunConfig::validate() const {
  policy.validate();
  if (horizon < 2) {
    throw ConfigError("horizon must be at least 2");
  }
  if (replications < 1) {
    throw ConfigError("replications must be at least 1");
  }
  if (trace_stride < 1) {
    throw ConfigError("trace_stride must be at least 1");
  }
}

namespace {

class EpisodeChecker {
 public:
  EpisodeChecker(std::uint64_t seed, std::int64_t replication) : seed_(seed), replication_(replication) {}

  void require(bool ok, const std::string& what) const {
    if (!ok) {
      throw InvariantViolation(seed_, static_cast<std::uint64_t>(replication_), what);
    }
  }

 private:
  std::uint64_t seed_;
  std::int64_t replication_;
};

}  // namespace

RunTrace run_episode(const RunConfig& config, std::int64_t replication, const EpisodeOptions& options) {
  const auto& env = config.environment;
  const auto& policy = config.policy;
  const std::size_t k = env.num_arms();
  const std::int64_t horizon = config.horizon;
  const bool batched = policy.mode == PolicyMode::batched;
  const EpisodeChecker check(config.master_seed, replication);

  RandomStream rng(config.master_seed, static_cast<std::uint64_t>(replication));
  PosteriorState posterior(k, policy.sigma2, batched ? policy.variant : Variant::full);
  PosteriorState boundary(k, policy.sigma2, Variant::skip);
  CycleBatchState schedule(k);
  const auto& gap = env.gaps();

  RunTrace trace;
  trace.seed = config.master_seed;
  trace.replication = replication;
  trace.horizon = horizon;
  trace.pulls.assign(k, 0);
  trace.points.reserve(static_cast<std::size_t>(horizon / config.trace_stride + 1));
  if (options.keep_actions) {
    trace.actions.reserve(static_cast<std::size_t>(horizon));
  }

  std::vector<double> thetas;
  double regret = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    posterior.sample_thetas(rng, thetas);
    const std::size_t arm = select_action(thetas);
    const double reward = draw_reward(env.arm(arm), rng);
    const CycleEvent event = schedule.record_action(t, arm);
    posterior.note_action(arm, reward, event.boundary);
    boundary.note_action(arm, reward, event.boundary);
    ++trace.pulls[arm];
    regret += gap[arm];
    if (options.keep_actions) {
      trace.actions.push_back(arm);
    }
    const std::int64_t batch_of_t = batched ? schedule.batch_index() : t;

    if (options.observer) {
      options.observer(StepView{t, arm, reward, event, thetas, posterior, boundary, schedule});
    }
    if (t % config.trace_stride == 0 || t == horizon) {
      trace.points.push_back(TracePoint{t, arm, regret, batch_of_t});
    }

    if (!batched) {
      posterior.commit_batch();
      boundary.commit_batch();
      continue;
    }
    if (!event.closed) {
      continue;
    }
    const auto& m = schedule.m();
    const auto& limits = schedule.limits();
    for (std::size_t i = 0; i < k; ++i) {
      check.require(m[i] <= limits[i], "cycle count overshot its batch limit at t=" + std::to_string(t));
    }
    if (schedule.batch_should_end()) {
      schedule.end_batch(t, policy.alpha);
      posterior.commit_batch();
      boundary.commit_batch();
      check.require(boundary.frozen_count() == schedule.m_at_last_batch_end(),
                    "committed boundary counts differ from M at batch end t=" + std::to_string(t));
      if (policy.variant == Variant::skip) {
        check.require(posterior.frozen_count() == schedule.m_at_last_batch_end(),
                      "skip posterior counts differ from M at batch end t=" + std::to_string(t));
      }
    }
  }

  trace.m_at_last_batch_end = schedule.m_at_last_batch_end();
  trace.m_final = schedule.m();
  trace.cycles = schedule.completed_cycles();
  trace.batches = batched ? schedule.batch_count(horizon) : horizon;
  trace.batch_summaries = schedule.batches();
  trace.final_regret = regret;

  const auto total_pulls = std::accumulate(trace.pulls.begin(), trace.pulls.end(), std::int64_t{0});
  check.require(total_pulls == horizon, "pull counts do not sum to T");
  const auto total_m = std::accumulate(trace.m_final.begin(), trace.m_final.end(), std::int64_t{0});
  check.require(total_m <= horizon, "cycle counts exceed T");
  for (std::size_t p = 1; p < trace.points.size(); ++p) {
    check.require(trace.points[p].pseudo_regret >= trace.points[p - 1].pseudo_regret, "pseudo-regret decreased");
    check.require(trace.points[p].batch_index >= trace.points[p - 1].batch_index, "batch index decreased");
  }
  // The bound is only meaningful once every arm could have been tried.
  if (batched && horizon >= static_cast<std::int64_t>(k)) {
    const double bound = batch_count_bound(k, policy.alpha, horizon);
    check.require(static_cast<double>(trace.batches) <= bound,
                  "B(T)=" + std::to_string(trace.batches) + " exceeds 1+K+K log_alpha(T/K)=" + std::to_string(bound));
  }
  return trace;
}

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  if (values.empty()) {
    return out;
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - out.mean) * (v - out.mean);
    }
    out.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

AggregateResult aggregate(const RunConfig& config, std::span<const RunTrace> traces) {
  AggregateResult out;
  out.policy = config.policy;
  out.horizon = config.horizon;
  out.replications = static_cast<std::int64_t>(traces.size());
  if (traces.empty()) {
    return out;
  }
  const std::size_t k = config.environment.num_arms();
  const std::size_t points = traces.front().points.size();
  std::vector<double> column(traces.size());

  out.curve_t.reserve(points);
  out.mean_regret.reserve(points);
  out.stderr_regret.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t r = 0; r < traces.size(); ++r) {
      column[r] = traces[r].points.at(p).pseudo_regret;
    }
    const auto ms = mean_stderr(column);
    out.curve_t.push_back(traces.front().points[p].t);
    out.mean_regret.push_back(ms.mean);
    out.stderr_regret.push_back(ms.standard_error);
  }

  for (std::size_t r = 0; r < traces.size(); ++r) {
    column[r] = traces[r].final_regret;
  }
  const auto final_ms = mean_stderr(column);
  out.mean_final_regret = final_ms.mean;
  out.stderr_final_regret = final_ms.standard_error;

  double batch_sum = 0.0;
  double cycle_sum = 0.0;
  out.mean_pulls.assign(k, 0.0);
  for (const auto& tr : traces) {
    batch_sum += static_cast<double>(tr.batches);
    cycle_sum += static_cast<double>(tr.cycles);
    out.max_batches = std::max(out.max_batches, tr.batches);
    for (std::size_t i = 0; i < k; ++i) {
      out.mean_pulls[i] += static_cast<double>(tr.pulls[i]);
    }
  }
  const double n = static_cast<double>(traces.size());
  out.mean_batches = batch_sum / n;
  out.mean_cycles = cycle_sum / n;
  for (auto& v : out.mean_pulls) {
    v /= n;
  }
  return out;
}

AggregateResult run_monte_carlo(const RunConfig& config, unsigned threads) {
  config.validate();
  auto traces = parallel_map(config.replications, threads, [&](std::int64_t r) {
    auto tr = run_episode(config, r);
    // Batch summaries are not aggregated; drop them to bound memory.
    tr.batch_summaries.clear();
    tr.batch_summaries.shrink_to_fit();
    return tr;
  });
  return aggregate(config, traces);
}

std::vector<double> regret_curve(std::span<const std::size_t> actions, const EnvironmentSpec& env) {
  std::vector<double> curve;
  curve.reserve(actions.size());
  double total = 0.0;
  for (std::size_t a : actions) {
    if (a >= env.num_arms()) {
      throw ContractViolation("regret_curve: arm index out of range");
    }
    total += env.gaps()[a];
    curve.push_back(total);
  }
  return curve;
}

std::vector<double> regret_curve(const RunTrace& trace, const EnvironmentSpec& env) {
  if (static_cast<std::int64_t>(trace.actions.size()) != trace.horizon) {
    throw ContractViolation("regret_curve: trace was recorded without its action sequence");
  }
  return regret_curve(trace.actions, env);
}

}  // namespace bts

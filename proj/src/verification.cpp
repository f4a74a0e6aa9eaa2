#include "bts/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bts/error.hpp"
#include "bts/parallel.hpp"

namespace bts {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("q_inverse: p must lie in (0, 1)");
  }
  // Q is strictly decreasing: Q(lo) > p > Q(hi) holds on [-40, 40] for every
  // representable p in (0, 1) except those below Q(40) ~ 4e-350, i.e. none.
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) {
      break;
    }
    const double q = q_function(mid);
    if (q == p) {
      return mid;
    }
    if (q > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::fabs(q_function(lo) - p) <= std::fabs(q_function(hi) - p) ? lo : hi;
}

namespace {

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

double tail_lower_bound(double delta) { return (1.0 / delta - 1.0 / (delta * delta * delta)) * std_normal_pdf(delta); }

double tail_upper_bound(double delta) { return std_normal_pdf(delta) / delta; }

std::vector<double> open_grid(double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = hi * static_cast<double>(k + 1) / static_cast<double>(n);
  }
  return out;
}

TailCheckReport tail_sandwich_check(std::span<const double> deltas, double slack) {
  TailCheckReport report;
  report.slack = slack;
  report.pass = true;
  report.worst_margin = INFINITY;
  for (double d : deltas) {
    if (!(d > 0.0)) {
      throw ContractViolation("tail sandwich needs delta > 0");
    }
    TailPoint p{d, tail_lower_bound(d), q_function(d), tail_upper_bound(d), false};
    const double margin = std::min(p.q - p.lower, p.upper - p.q);
    // Slack is relative to the size of the quantities compared.
    p.pass = margin >= -slack * std::max(p.q, 1e-300);
    report.worst_margin = std::min(report.worst_margin, margin);
    report.pass = report.pass && p.pass;
    report.points.push_back(p);
  }
  return report;
}

InverseTailReport inverse_tail_check(std::span<const double> x_grid) {
  InverseTailReport report;
  std::vector<bool> holds;
  for (double x : x_grid) {
    if (!(x > 1.0)) {
      throw ContractViolation("inverse tail check needs x > 1");
    }
    const double qi = q_inverse(1.0 / x);
    const double fl = std::sqrt(4.0 / 3.0 * std::log(x));
    report.x.push_back(x);
    report.q_inv.push_back(qi);
    report.floor.push_back(fl);
    holds.push_back(qi >= fl);
  }
  // x0: start of the maximal run of successes that reaches the end of the grid.
  std::size_t start = holds.size();
  while (start > 0 && holds[start - 1]) {
    --start;
  }
  if (start < holds.size()) {
    report.x0 = report.x[start];
  }
  // The inequality should fail on a prefix and then hold for good.
  const auto first_ok = std::find(holds.begin(), holds.end(), true);
  report.holds_beyond_x0 = report.x0.has_value() && static_cast<std::size_t>(first_ok - holds.begin()) == start;
  return report;
}

double bernoulli_centered_mgf(double p, double lambda) {
  return p * std::exp(lambda * (1.0 - p)) + (1.0 - p) * std::exp(-lambda * p);
}

double hoeffding_bound(double lambda, double width) { return std::exp(lambda * lambda * width * width / 8.0); }

namespace {

void require_bounded(const ArmSpec& arm, const char* who) {
  if (!arm.bounded()) {
    throw ContractViolation(std::string(who) + ": rewards must be bounded in [0, 1], got " + arm.describe());
  }
}

void require_bounded(const EnvironmentSpec& env, const char* who) {
  if (!env.bounded()) {
    throw ContractViolation(std::string(who) + ": environment must have [0, 1]-bounded rewards");
  }
}

bool not_above(double estimate, double standard_error, double bound) {
  return estimate - kViolationSigmas * standard_error <= bound;
}

FrequencyCheck frequency_check(std::span<const double> indicators, double bound, std::int64_t eligible) {
  FrequencyCheck out;
  const auto ms = mean_stderr(indicators);
  out.frequency = ms.mean;
  out.standard_error = ms.standard_error;
  out.bound = bound;
  out.eligible = eligible;
  out.vacuous = eligible == 0;
  out.pass = not_above(out.frequency, out.standard_error, bound);
  return out;
}

}  // namespace

MgfReport hoeffding_mgf_check(const ArmSpec& arm, std::span<const double> lambdas, std::int64_t samples,
                              std::uint64_t seed) {
  require_bounded(arm, "hoeffding_mgf_check");
  if (samples < 1) {
    throw ContractViolation("hoeffding_mgf_check: need at least one sample");
  }
  MgfReport report{arm, samples, {}, true};
  RandomStream rng(seed);
  std::vector<double> draws(static_cast<std::size_t>(samples));
  for (auto& d : draws) {
    d = draw_reward(arm, rng);
  }
  std::vector<double> values(draws.size());
  for (double lambda : lambdas) {
    for (std::size_t s = 0; s < draws.size(); ++s) {
      values[s] = std::exp(lambda * (draws[s] - arm.mean()));
    }
    const auto ms = mean_stderr(values);
    MgfPoint p{lambda, ms.mean, ms.standard_error, hoeffding_bound(lambda), false};
    p.pass = not_above(p.estimate, p.standard_error, p.bound);
    report.pass = report.pass && p.pass;
    report.points.push_back(p);
  }
  return report;
}

MgfReport hoeffding_mgf_exact(const ArmSpec& arm, std::span<const double> lambdas) {
  require_bounded(arm, "hoeffding_mgf_exact");
  MgfReport report{arm, 0, {}, true};
  for (double lambda : lambdas) {
    MgfPoint p{lambda, bernoulli_centered_mgf(arm.p(), lambda), 0.0, hoeffding_bound(lambda), false};
    p.pass = p.estimate <= p.bound;
    report.pass = report.pass && p.pass;
    report.points.push_back(p);
  }
  return report;
}

std::vector<MartingaleEstimate> supermartingale_check(const RunConfig& config, std::size_t arm,
                                                      std::span<const double> lambdas,
                                                      std::span<const std::int64_t> checkpoints, unsigned threads) {
  config.validate();
  require_bounded(config.environment, "supermartingale_check");
  if (config.policy.mode != PolicyMode::batched) {
    throw ContractViolation("supermartingale_check: needs the batched policy");
  }
  if (arm >= config.environment.num_arms()) {
    throw ContractViolation("supermartingale_check: arm out of range");
  }
  for (auto t : checkpoints) {
    if (t < 1 || t > config.horizon) {
      throw ContractViolation("supermartingale_check: checkpoint outside [1, T]");
    }
  }
  const double mu = config.environment.means()[arm];
  const std::size_t nl = lambdas.size();
  const std::size_t nc = checkpoints.size();

  // Per replication: X_t for every (lambda, checkpoint), lambda-major.
  auto per_rep = parallel_map(config.replications, threads, [&](std::int64_t r) {
    std::vector<double> xs(nl * nc, 0.0);
    EpisodeOptions opts;
    opts.observer = [&](const StepView& v) {
      for (std::size_t c = 0; c < nc; ++c) {
        if (checkpoints[c] != v.t) {
          continue;
        }
        const double s = v.boundary_stats.frozen_sum()[arm];
        const double m = static_cast<double>(v.boundary_stats.frozen_count()[arm]);
        for (std::size_t l = 0; l < nl; ++l) {
          const double lambda = lambdas[l];
          xs[l * nc + c] = std::exp(lambda * (s - mu * m) - lambda * lambda / 8.0 * (1.0 + m));
        }
      }
    };
    run_episode(config, r, opts);
    return xs;
  });

  std::vector<MartingaleEstimate> out;
  std::vector<double> column(per_rep.size());
  for (std::size_t l = 0; l < nl; ++l) {
    MartingaleEstimate est;
    est.lambda = lambdas[l];
    est.arm = arm;
    est.replications = config.replications;
    est.pass = true;
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t r = 0; r < per_rep.size(); ++r) {
        column[r] = per_rep[r][l * nc + c];
      }
      const auto ms = mean_stderr(column);
      MartingalePoint p{checkpoints[c], ms.mean, ms.standard_error, not_above(ms.mean, ms.standard_error, 1.0)};
      est.pass = est.pass && p.pass;
      est.points.push_back(p);
    }
    out.push_back(std::move(est));
  }
  return out;
}

MartingaleEstimate supermartingale_check(const RunConfig& config, std::size_t arm, double lambda,
                                         std::span<const std::int64_t> checkpoints, unsigned threads) {
  const double one[] = {lambda};
  return supermartingale_check(config, arm, one, checkpoints, threads).front();
}

MisestimationReport misestimation_check(const RunConfig& config, std::size_t arm, std::int64_t t, double constant,
                                        unsigned threads) {
  config.validate();
  const auto& env = config.environment;
  require_bounded(env, "misestimation_check");
  if (arm >= env.num_arms()) {
    throw ContractViolation("misestimation_check: arm out of range");
  }
  const double gap = env.gaps()[arm];
  if (!(gap > 0.0)) {
    throw ContractViolation("misestimation_check: arm must be strictly suboptimal");
  }
  if (t < 1 || t > config.horizon) {
    throw ContractViolation("misestimation_check: t outside [1, T]");
  }

  MisestimationReport report;
  report.best_arm = env.best_arm();
  report.arm = arm;
  report.t = t;
  report.horizon = config.horizon;
  report.constant = constant;
  report.replications = config.replications;
  report.threshold = constant * config.policy.sigma2 * std::log(static_cast<double>(config.horizon)) / (gap * gap);
  const double midpoint = 0.5 * (env.means()[report.best_arm] + env.means()[arm]);
  const double threshold = report.threshold;
  const std::size_t best = report.best_arm;

  // The algorithm never looks at T, so the first t steps of a horizon-T run
  // are a horizon-t run.
  RunConfig truncated = config;
  truncated.horizon = std::max<std::int64_t>(t, 2);

  struct Outcome {
    double low = 0.0;
    double high = 0.0;
    bool best_eligible = false;
    bool arm_eligible = false;
  };
  auto outcomes = parallel_map(truncated.replications, threads, [&](std::int64_t r) {
    Outcome o;
    EpisodeOptions opts;
    opts.observer = [&](const StepView& v) {
      if (v.t != t) {
        return;
      }
      const auto& m = v.boundary_stats.frozen_count();
      o.best_eligible = static_cast<double>(m[best]) >= threshold;
      o.arm_eligible = static_cast<double>(m[arm]) >= threshold;
      o.low = (o.best_eligible && v.thetas[best] <= midpoint) ? 1.0 : 0.0;
      o.high = (o.arm_eligible && v.thetas[arm] > midpoint) ? 1.0 : 0.0;
    };
    run_episode(truncated, r, opts);
    return o;
  });

  std::vector<double> low(outcomes.size());
  std::vector<double> high(outcomes.size());
  std::int64_t best_eligible = 0;
  std::int64_t arm_eligible = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    low[r] = outcomes[r].low;
    high[r] = outcomes[r].high;
    best_eligible += outcomes[r].best_eligible ? 1 : 0;
    arm_eligible += outcomes[r].arm_eligible ? 1 : 0;
  }
  const double bound = 2.0 / static_cast<double>(config.horizon);
  const bool asserted = constant >= 32.0 && config.policy.sigma2 >= 1.0;
  report.best_arm_low = frequency_check(low, bound, best_eligible);
  report.arm_high = frequency_check(high, bound, arm_eligible);
  report.best_arm_low.asserted = asserted;
  report.arm_high.asserted = asserted;
  report.pass = !asserted || (report.best_arm_low.pass && report.arm_high.pass);
  return report;
}

StoppedTailReport stopped_tail_check(const RunConfig& config, std::size_t arm, std::int64_t visit,
                                     std::span<const double> x_grid, unsigned threads) {
  config.validate();
  require_bounded(config.environment, "stopped_tail_check");
  if (config.policy.mode != PolicyMode::batched) {
    throw ContractViolation("stopped_tail_check: needs the batched policy");
  }
  if (arm >= config.environment.num_arms()) {
    throw ContractViolation("stopped_tail_check: arm out of range");
  }
  if (visit < 2) {
    throw ContractViolation("stopped_tail_check: visit index must exceed 1");
  }
  for (double x : x_grid) {
    if (!(x >= 0.0)) {
      throw ContractViolation("stopped_tail_check: x must be non-negative");
    }
  }
  const double mu = config.environment.means()[arm];

  // z-score at the requested visit, or nullopt when the visit never happens.
  auto scores = parallel_map(config.replications, threads, [&](std::int64_t r) {
    std::optional<double> z;
    std::int64_t visits = 0;
    EpisodeOptions opts;
    opts.observer = [&](const StepView& v) {
      if (!v.cycle.boundary || v.arm != arm || ++visits != visit) {
        return;
      }
      const double s = v.boundary_stats.frozen_sum()[arm];
      const double m = static_cast<double>(v.boundary_stats.frozen_count()[arm]);
      z = (s - mu * m) / std::sqrt(1.0 + m);
    };
    run_episode(config, r, opts);
    return z;
  });

  StoppedTailReport report;
  report.arm = arm;
  report.visit = visit;
  report.replications = config.replications;
  report.theory_regime = config.policy.theory_regime();
  report.pass = true;
  for (const auto& z : scores) {
    report.reached += z.has_value() ? 1 : 0;
  }
  std::vector<double> up(scores.size());
  std::vector<double> down(scores.size());
  for (double x : x_grid) {
    for (std::size_t r = 0; r < scores.size(); ++r) {
      up[r] = (scores[r] && *scores[r] > x) ? 1.0 : 0.0;
      down[r] = (scores[r] && *scores[r] < -x) ? 1.0 : 0.0;
    }
    const double bound = std::exp(-2.0 * x * x / config.policy.alpha);
    StoppedTailPoint p{x, frequency_check(up, bound, report.reached), frequency_check(down, bound, report.reached)};
    report.pass = report.pass && p.upper.pass && p.lower.pass;
    report.points.push_back(p);
  }
  return report;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::report_only:
      return "report";
  }
  return "report";
}

}  // namespace bts

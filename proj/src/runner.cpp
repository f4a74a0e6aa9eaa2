#include "bts/runner.hpp"

#include <cmath>
#include <sstream>

#include "bts/csv.hpp"
#include "bts/error.hpp"
#include "bts/parallel.hpp"

namespace bts {

namespace {

unsigned pick_threads(const ExperimentFile& file, const RunnerOptions& options) {
  const unsigned n = options.threads.value_or(file.threads);
  return n == 0 ? default_thread_count() : n;
}

std::string policy_label(const PolicyConfig& p) {
  if (p.mode == PolicyMode::classical) {
    return "classical_ts";
  }
  return "batched_ts(alpha=" + format_double(p.alpha) + ", " + std::string(to_string(p.variant)) + ")";
}

}  // namespace

std::string trace_file_name(const PolicyConfig& policy, std::int64_t replication) {
  std::string name(to_string(policy.mode));
  if (policy.mode == PolicyMode::batched) {
    name += "_a" + format_double(policy.alpha) + "_" + std::string(to_string(policy.variant));
  }
  return name + "_rep" + std::to_string(replication) + ".csv";
}

std::vector<AggregateResult> run_experiments(const ExperimentFile& file, const RunnerOptions& options) {
  const unsigned threads = pick_threads(file, options);
  bool matched = !options.experiment.has_value();
  std::vector<AggregateResult> all;
  for (const auto& e : file.experiments) {
    if (options.experiment && *options.experiment != e.name) {
      continue;
    }
    matched = true;
    const auto dir = file.output_dir / e.name;
    std::vector<AggregateResult> results;
    for (const auto& p : e.policies) {
      const RunConfig config = file.run_config(e, p);
      config.validate();
      if (options.log) {
        *options.log << e.name << ": " << policy_label(p) << ", T=" << e.horizon << ", " << e.replications
                     << " replications" << std::endl;
      }
      // Traces are regenerated from their seeds, so writing them does not
      // disturb the Monte Carlo aggregate.
      for (std::int64_t r = 0; r < e.trace_replications; ++r) {
        write_trace_csv(run_episode(config, r), dir / "traces" / trace_file_name(p, r));
      }
      results.push_back(run_monte_carlo(config, threads));
      if (options.log) {
        const auto& res = results.back();
        *options.log << "  mean regret " << res.mean_final_regret << " (stderr " << res.stderr_final_regret
                     << "), mean batches " << res.mean_batches << ", max batches " << res.max_batches << std::endl;
      }
    }
    write_aggregate_csv(results, dir / "aggregate.csv");
    write_arm_counts_csv(results, dir / "arm_counts.csv");
    all.insert(all.end(), results.begin(), results.end());
  }
  if (!matched) {
    throw ConfigError("no experiment named '" + *options.experiment + "'");
  }
  return all;
}

namespace {

std::string join_params(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) {
      out += ';';
    }
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

Verdict verdict_of(bool pass) { return pass ? Verdict::pass : Verdict::fail; }

VerificationRecord frequency_record(const std::string& check, const std::string& params, const FrequencyCheck& f) {
  Verdict v = f.asserted ? verdict_of(f.pass) : Verdict::report_only;
  return VerificationRecord{check, params, f.frequency, f.standard_error, f.bound, v, f.vacuous};
}

}  // namespace

std::vector<VerificationRecord> run_verification_suite(const ExperimentFile& file, const RunnerOptions& options) {
  const unsigned threads = pick_threads(file, options);
  const auto& vs = file.verification;
  std::vector<VerificationRecord> rows;
  auto note = [&](const std::string& what) {
    if (options.log) {
      *options.log << what << std::endl;
    }
  };

  note("gaussian tail sandwich");
  const auto grid = open_grid(8.0, 1000);
  const auto sandwich = tail_sandwich_check(grid);
  rows.push_back({"q_tail_sandwich", "grid=1000 points on (0;8]", sandwich.worst_margin, 0.0, 0.0,
                  verdict_of(sandwich.pass), false});

  std::vector<double> xs;
  for (int e = 1; e <= 120; ++e) {
    xs.push_back(std::pow(10.0, 0.1 * e));
  }
  const auto inv = inverse_tail_check(xs);
  rows.push_back({"q_inverse_tail", "x grid=10^0.1..10^12", inv.x0.value_or(NAN), 0.0, 0.0,
                  verdict_of(inv.holds_beyond_x0), false});

  note("hoeffding mgf bound");
  std::vector<double> lambdas;
  for (int l = -10; l <= 10; ++l) {
    lambdas.push_back(0.5 * l);
  }
  for (int k = 1; k <= 9; ++k) {
    const auto arm = ArmSpec::bernoulli(0.1 * k);
    const auto exact = hoeffding_mgf_exact(arm, lambdas);
    const auto mc = hoeffding_mgf_check(arm, lambdas, vs.mgf_samples, file.master_seed + static_cast<unsigned>(k));
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const auto params = join_params({{"p", format_double(arm.p())}, {"lambda", format_double(lambdas[i])}});
      const auto& e = exact.points[i];
      rows.push_back({"hoeffding_mgf_exact", params, e.estimate, 0.0, e.bound, verdict_of(e.pass), false});
      const auto& m = mc.points[i];
      rows.push_back({"hoeffding_mgf_mc", params, m.estimate, m.standard_error, m.bound, verdict_of(m.pass), false});
    }
  }

  const EnvironmentSpec env(vs.arms);
  RunConfig base{env, vs.policy, vs.martingale_horizon, vs.replications, file.master_seed, vs.martingale_horizon};

  note("supermartingale");
  for (std::size_t arm = 0; arm < env.num_arms(); ++arm) {
    const auto ests = supermartingale_check(base, arm, vs.lambdas, vs.checkpoints, threads);
    for (const auto& est : ests) {
      for (const auto& p : est.points) {
        const auto params = join_params({{"arm", std::to_string(arm)},
                                         {"lambda", format_double(est.lambda)},
                                         {"t", std::to_string(p.t)},
                                         {"alpha", format_double(vs.policy.alpha)},
                                         {"reps", std::to_string(vs.replications)}});
        rows.push_back({"supermartingale", params, p.mean, p.standard_error, 1.0, verdict_of(p.pass), false});
      }
    }
  }

  note("stopped tail");
  RunConfig tail = base;
  tail.horizon = vs.tail_horizon;
  tail.trace_stride = vs.tail_horizon;
  for (std::size_t arm = 0; arm < env.num_arms(); ++arm) {
    const auto rep = stopped_tail_check(tail, arm, vs.tail_visit, vs.tail_x, threads);
    for (const auto& p : rep.points) {
      const auto params = join_params({{"arm", std::to_string(arm)},
                                       {"visit", std::to_string(rep.visit)},
                                       {"x", format_double(p.x)},
                                       {"alpha", format_double(vs.policy.alpha)},
                                       {"reached", std::to_string(rep.reached)}});
      rows.push_back(frequency_record("stopped_tail_upper", params, p.upper));
      rows.push_back(frequency_record("stopped_tail_lower", params, p.lower));
    }
  }

  note("misestimation");
  RunConfig mis = base;
  mis.horizon = vs.misestimation_horizon;
  mis.trace_stride = vs.misestimation_horizon;
  for (std::size_t arm = 0; arm < env.num_arms(); ++arm) {
    if (!(env.gaps()[arm] > 0.0)) {
      continue;
    }
    for (double constant : {32.0, vs.diagnostic_constant}) {
      for (std::int64_t t : {vs.misestimation_t, vs.misestimation_horizon}) {
        const auto rep = misestimation_check(mis, arm, t, constant, threads);
        const auto params = join_params({{"arm", std::to_string(arm)},
                                         {"t", std::to_string(t)},
                                         {"T", std::to_string(mis.horizon)},
                                         {"c", format_double(constant)},
                                         {"threshold", format_double(rep.threshold)}});
        rows.push_back(frequency_record("misestimation_best_low", params, rep.best_arm_low));
        rows.push_back(frequency_record("misestimation_arm_high", params, rep.arm_high));
      }
    }
  }

  write_verification_csv(rows, file.output_dir / "verification.csv");
  return rows;
}

}  // namespace bts

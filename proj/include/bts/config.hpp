#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bts/simulator.hpp"

namespace bts {

/// One named experiment: an environment and horizon shared by every policy
/// it compares.
struct Experiment {
  std::string name;
  EnvironmentSpec environment;
  std::int64_t horizon = 2;
  std::int64_t replications = 1;
  std::int64_t trace_stride = 1;
  /// Replications 0..n-1 of every policy also get a per-run trace CSV.
  std::int64_t trace_replications = 0;
  std::optional<std::uint64_t> seed;
  std::vector<PolicyConfig> policies;
};

/// Settings of the `--verify` suite.
struct VerificationSettings {
  std::vector<ArmSpec> arms = {ArmSpec::bernoulli(0.75), ArmSpec::bernoulli(0.25)};
  PolicyConfig policy{PolicyMode::batched, 2.0, 1.0, Variant::skip};
  std::int64_t replications = 10000;
  std::int64_t martingale_horizon = 2000;
  std::vector<std::int64_t> checkpoints = {100, 500, 2000};
  std::vector<double> lambdas = {-1.0, -0.25, 0.0, 0.25, 1.0};
  std::int64_t tail_horizon = 5000;
  std::int64_t tail_visit = 4;
  std::vector<double> tail_x = {0.5, 1.0, 2.0};
  std::int64_t misestimation_horizon = 1000;
  std::int64_t misestimation_t = 200;
  double diagnostic_constant = 1.0;
  std::int64_t mgf_samples = 100000;
};

struct ExperimentFile {
  std::filesystem::path source;
  std::filesystem::path output_dir = "results";
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  std::vector<Experiment> experiments;
  VerificationSettings verification;

  /// RunConfig for one policy of one experiment.
  RunConfig run_config(const Experiment& e, const PolicyConfig& p) const;
};

/// Reads and fully validates a config file. Errors are ConfigError with a
/// `path:line:` prefix naming the offending key.
ExperimentFile parse_config(const std::filesystem::path& path);
ExperimentFile parse_config_text(const std::string& text, const std::string& source_name = "<config>");

/// Parses `bernoulli(p)`, `gaussian(mean, variance)`, optionally followed by
/// `*n` to repeat the arm n times.
std::vector<ArmSpec> parse_arm_list(const std::string& text);

}  // namespace bts

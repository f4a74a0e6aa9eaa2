#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bts/config.hpp"
#include "bts/csv.hpp"
#include "bts/error.hpp"
#include "bts/runner.hpp"

namespace bts {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    lines.push_back(line);
  }
  return lines;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bts_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kTwoArmRecipe = R"(
seed = 5
[experiment fig1a]
arms = bernoulli(0.75), bernoulli(0.25)
horizon = 100000
replications = 1000
trace_stride = 100
policies = batched_ts, classical_ts
alpha = 1.00001, 1.25, 1.5, 2
)";

TEST(Config, TwoArmRecipeGivesFivePolicies) {
  const auto file = parse_config_text(kTwoArmRecipe);
  ASSERT_EQ(file.experiments.size(), 1u);
  const auto& e = file.experiments[0];
  EXPECT_EQ(e.name, "fig1a");
  EXPECT_EQ(e.horizon, 100000);
  EXPECT_EQ(e.replications, 1000);
  EXPECT_EQ(e.environment.num_arms(), 2u);
  ASSERT_EQ(e.policies.size(), 5u);
  int classical = 0;
  for (const auto& p : e.policies) {
    EXPECT_EQ(p.sigma2, 1.0);
    EXPECT_EQ(p.variant, Variant::full);
    classical += p.mode == PolicyMode::classical ? 1 : 0;
  }
  EXPECT_EQ(classical, 1);
  EXPECT_EQ(file.master_seed, 5u);
  const auto rc = file.run_config(e, e.policies[0]);
  EXPECT_EQ(rc.master_seed, 5u);
  EXPECT_EQ(rc.trace_stride, 100);
}

TEST(Config, ArmListRepeat) {
  const auto arms = parse_arm_list("gaussian(1, 1), gaussian(0,1)*4");
  ASSERT_EQ(arms.size(), 5u);
  EXPECT_EQ(arms[0], ArmSpec::gaussian(1.0, 1.0));
  for (std::size_t i = 1; i < 5; ++i) {
    EXPECT_EQ(arms[i], ArmSpec::gaussian(0.0, 1.0));
  }
  EXPECT_THROW(parse_arm_list("poisson(3)"), ConfigError);
  EXPECT_THROW(parse_arm_list("bernoulli(1.5)"), ConfigError);
  EXPECT_THROW(parse_arm_list("bernoulli(0.5)*0"), ConfigError);
}

TEST(Config, RejectsAlphaAtMostOne) {
  const std::string msg = config_error("[experiment a]\narms = bernoulli(0.5), bernoulli(0.4)\nhorizon = 10\nalpha = 0.9\n");
  EXPECT_NE(msg.find("alpha must exceed 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cfg:4:"), std::string::npos) << msg;
  EXPECT_NE(config_error("[experiment a]\narms = bernoulli(0.5), bernoulli(0.4)\nhorizon = 10\nalpha = 1\n"), "");
}

TEST(Config, ErrorsNameLineAndKey) {
  EXPECT_NE(config_error("seed = 1\nbogus = 2\n").find("cfg:2: unknown key 'bogus'"), std::string::npos);
  EXPECT_NE(config_error("[experiment a]\narms = bernoulli(0.5)\nhorizon = 10\n").find("key 'arms'"),
            std::string::npos);
  EXPECT_NE(config_error("[experiment a]\narms = bernoulli(0.5), bernoulli(0.4)\n").find("horizon"),
            std::string::npos);
  EXPECT_NE(config_error("[nonsense]\n").find("unknown section"), std::string::npos);
  EXPECT_NE(config_error("seed = 1\nseed = 2\n").find("duplicate key"), std::string::npos);
  EXPECT_NE(config_error("[experiment a]\narms = bernoulli(0.5), bernoulli(0.4)\nhorizon = 10\n"
                         "[experiment a]\narms = bernoulli(0.5), bernoulli(0.4)\nhorizon = 10\n")
                .find("duplicate experiment"),
            std::string::npos);
  EXPECT_NE(config_error("[experiment a]\narms = bernoulli(0.5), bernoulli(0.4)\nhorizon = 10\nsigma2 = 0\n")
                .find("sigma2 must be positive"),
            std::string::npos);
}

TEST(Config, MissingFile) {
  try {
    parse_config("/nonexistent/definitely_missing.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cannot open config file"), std::string::npos);
  }
}

TEST(Config, VerificationDefaults) {
  const auto file = parse_config_text("[verification]\nreplications = 50\n");
  EXPECT_EQ(file.verification.replications, 50);
  EXPECT_EQ(file.verification.policy.alpha, 2.0);
  EXPECT_EQ(file.verification.tail_visit, 4);
  EXPECT_NE(config_error("[verification]\narms = gaussian(0,1), gaussian(1,1)\n"), "");
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Csv, TraceLineCounts) {
  const auto dir = scratch_dir("trace_counts");
  const EnvironmentSpec env({ArmSpec::bernoulli(0.75), ArmSpec::bernoulli(0.25)});
  RunConfig config{env, PolicyConfig{}, 4, 1, 1, 1};
  write_trace_csv(run_episode(config, 0), dir / "a.csv");
  auto lines = read_lines(dir / "a.csv");
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "t,action,pseudo_regret,batch_index");

  config.horizon = 100;
  config.trace_stride = 10;
  write_trace_csv(run_episode(config, 0), dir / "b.csv");
  lines = read_lines(dir / "b.csv");
  ASSERT_EQ(lines.size(), 11u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_EQ(split_csv_line(lines[i])[0], std::to_string(10 * i));
  }
}

TEST(Csv, TraceRoundTrip) {
  const auto dir = scratch_dir("trace_round_trip");
  std::vector<ArmSpec> arms = {ArmSpec::gaussian(0.7, 1.0), ArmSpec::gaussian(0.1, 2.0), ArmSpec::gaussian(0.3, 0.5)};
  const EnvironmentSpec env(arms);
  for (std::int64_t r = 0; r < 10; ++r) {
    const RunConfig config{env, PolicyConfig{PolicyMode::batched, 1.3, 1.0, Variant::skip}, 500 + 37 * r, 1,
                           static_cast<std::uint64_t>(r), 1 + r};
    const auto trace = run_episode(config, r);
    write_trace_csv(trace, dir / "t.csv");
    EXPECT_EQ(read_trace_csv(dir / "t.csv"), trace.points);
  }
}

TEST(Csv, AggregateRows) {
  const auto dir = scratch_dir("aggregate");
  const EnvironmentSpec env({ArmSpec::bernoulli(0.75), ArmSpec::bernoulli(0.25)});
  std::vector<AggregateResult> results;
  results.push_back(run_monte_carlo(RunConfig{env, PolicyConfig{}, 200, 5, 1, 50}));
  results.push_back(
      run_monte_carlo(RunConfig{env, PolicyConfig{PolicyMode::classical, 2.0, 1.0, Variant::full}, 200, 5, 1, 50}));
  write_aggregate_csv(results, dir / "aggregate.csv");
  const auto lines = read_lines(dir / "aggregate.csv");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "policy,alpha,variant,T,mean_final_regret,stderr_final_regret,mean_batches,max_batches,mean_cycles,"
            "mean_batches_ceil");
  const auto batched = split_csv_line(lines[1]);
  EXPECT_EQ(batched[0], "batched_ts");
  EXPECT_EQ(batched[1], "2");
  EXPECT_EQ(batched[2], "full");
  const auto classical = split_csv_line(lines[2]);
  ASSERT_EQ(classical.size(), 10u);
  EXPECT_EQ(classical[0], "classical_ts");
  EXPECT_EQ(classical[1], "");
  EXPECT_EQ(classical[2], "");
  EXPECT_EQ(classical[3], "200");
  EXPECT_EQ(classical[6], "200");
  EXPECT_EQ(classical[9], "200");

  const auto curves = read_lines(dir / "curves.csv");
  EXPECT_EQ(curves[0], "policy,alpha,t,mean_regret,stderr");
  EXPECT_EQ(curves.size(), 1u + 2u * 4u);
}

TEST(Csv, VerificationRows) {
  const auto dir = scratch_dir("verification");
  const std::vector<VerificationRecord> rows = {
      {"q_tail_sandwich", "grid=1000;hi=10", 0.5, 0.0, 0.0, Verdict::pass, false},
      {"misestimation_arm_high", "c=1", 0.0, 0.0, 0.002, Verdict::report_only, true},
  };
  write_verification_csv(rows, dir / "v.csv");
  const auto lines = read_lines(dir / "v.csv");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "check,parameters,estimate,stderr,bound,verdict,vacuous");
  EXPECT_EQ(lines[1], "q_tail_sandwich,grid=1000;hi=10,0.5,0,0,pass,false");
  EXPECT_EQ(lines[2], "misestimation_arm_high,c=1,0,0,0.002,report,true");
}

TEST(Runner, TraceFileNames) {
  EXPECT_EQ(trace_file_name(PolicyConfig{}, 0), "batched_ts_a2_full_rep0.csv");
  EXPECT_EQ(trace_file_name(PolicyConfig{PolicyMode::classical, 2.0, 1.0, Variant::full}, 3), "classical_ts_rep3.csv");
}

TEST(Runner, WritesExperimentLayout) {
  const auto dir = scratch_dir("runner");
  auto file = parse_config_text(R"(
seed = 3
[experiment tiny]
arms = bernoulli(0.6), bernoulli(0.4)
horizon = 300
replications = 4
trace_stride = 100
trace_replications = 2
policies = batched_ts, classical_ts
alpha = 1.5
)");
  file.output_dir = dir;
  const auto results = run_experiments(file);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "tiny" / "aggregate.csv"));
  EXPECT_TRUE(fs::exists(dir / "tiny" / "curves.csv"));
  EXPECT_TRUE(fs::exists(dir / "tiny" / "arm_counts.csv"));
  EXPECT_TRUE(fs::exists(dir / "tiny" / "traces" / "batched_ts_a1.5_full_rep1.csv"));
  EXPECT_TRUE(fs::exists(dir / "tiny" / "traces" / "classical_ts_rep0.csv"));
  EXPECT_FALSE(fs::exists(dir / "tiny" / "traces" / "classical_ts_rep2.csv"));
  RunnerOptions only;
  only.experiment = "nope";
  EXPECT_THROW(run_experiments(file, only), ConfigError);
}

}  // namespace
}  // namespace bts

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bts/config.hpp"
#include "bts/verification.hpp"

namespace bts {

struct RunnerOptions {
  /// 0 picks the hardware concurrency; unset uses the file's value.
  std::optional<unsigned> threads;
  std::optional<std::string> experiment;
  /// Progress lines; may be null.
  std::ostream* log = nullptr;
};

/// Runs every selected experiment and writes, under <out>/<experiment>/:
/// aggregate.csv, curves.csv, arm_counts.csv and traces/*.csv.
/// Returns the aggregate of each (experiment, policy) in file order.
std::vector<AggregateResult> run_experiments(const ExperimentFile& file, const RunnerOptions& options = {});

/// Runs the numeric and Monte Carlo checks configured in the file's
/// verification section. The returned rows are also written to
/// <out>/verification.csv.
std::vector<VerificationRecord> run_verification_suite(const ExperimentFile& file, const RunnerOptions& options = {});

/// Trace file name for one run, e.g. `batched_ts_a2_full_rep0.csv`.
std::string trace_file_name(const PolicyConfig& policy, std::int64_t replication);

}  // namespace bts

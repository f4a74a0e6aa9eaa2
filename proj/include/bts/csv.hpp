#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bts/simulator.hpp"
#include "bts/verification.hpp"

namespace bts {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Header `t,action,pseudo_regret,batch_index`, one row per recorded point.
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path);
std::vector<TracePoint> read_trace_csv(const std::filesystem::path& path);

/// One row per (policy, alpha, variant) cell. Also writes `curves.csv` next
/// to `path` in long format: policy,alpha,t,mean_regret,stderr.
void write_aggregate_csv(std::span<const AggregateResult> results, const std::filesystem::path& path);

/// Per-arm mean pull counts: policy,alpha,variant,arm,mean_pulls.
void write_arm_counts_csv(std::span<const AggregateResult> results, const std::filesystem::path& path);

/// check,parameters,estimate,stderr,bound,verdict,vacuous
void write_verification_csv(std::span<const VerificationRecord> records, const std::filesystem::path& path);

/// Splits one CSV line on commas; fields never contain quotes in our files.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace bts

#include "bts/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "bts/error.hpp"

namespace bts {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::string alpha_field(const PolicyConfig& p) {
  return p.mode == PolicyMode::batched ? format_double(p.alpha) : std::string();
}

std::string variant_field(const PolicyConfig& p) {
  return p.mode == PolicyMode::batched ? std::string(to_string(p.variant)) : std::string();
}

template <class T>
T parse_number(const std::string& field, const std::filesystem::path& path) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::runtime_error("malformed number '" + field + "' in " + path.string());
  }
  return value;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "t,action,pseudo_regret,batch_index\n";
  for (const auto& p : trace.points) {
    out << p.t << ',' << p.action << ',' << format_double(p.pseudo_regret) << ',' << p.batch_index << '\n';
  }
  finish(out, path);
}

std::vector<TracePoint> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != "t,action,pseudo_regret,batch_index") {
    throw std::runtime_error("unexpected trace header in " + path.string());
  }
  std::vector<TracePoint> points;
  while (std::getline(in, line)) {
    const auto f = split_csv_line(line);
    if (f.size() != 4) {
      throw std::runtime_error("trace row needs 4 fields in " + path.string());
    }
    points.push_back(TracePoint{parse_number<std::int64_t>(f[0], path), parse_number<std::size_t>(f[1], path),
                                parse_number<double>(f[2], path), parse_number<std::int64_t>(f[3], path)});
  }
  return points;
}

void write_aggregate_csv(std::span<const AggregateResult> results, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "policy,alpha,variant,T,mean_final_regret,stderr_final_regret,mean_batches,max_batches,mean_cycles,"
         "mean_batches_ceil\n";
  for (const auto& r : results) {
    out << to_string(r.policy.mode) << ',' << alpha_field(r.policy) << ',' << variant_field(r.policy) << ','
        << r.horizon << ',' << format_double(r.mean_final_regret) << ',' << format_double(r.stderr_final_regret)
        << ',' << format_double(r.mean_batches) << ',' << r.max_batches << ',' << format_double(r.mean_cycles) << ','
        << static_cast<std::int64_t>(std::ceil(r.mean_batches)) << '\n';
  }
  finish(out, path);

  const auto curves_path = path.parent_path() / "curves.csv";
  auto curves = open_for_write(curves_path);
  curves << "policy,alpha,t,mean_regret,stderr\n";
  for (const auto& r : results) {
    for (std::size_t p = 0; p < r.curve_t.size(); ++p) {
      curves << to_string(r.policy.mode) << ',' << alpha_field(r.policy) << ',' << r.curve_t[p] << ','
             << format_double(r.mean_regret[p]) << ',' << format_double(r.stderr_regret[p]) << '\n';
    }
  }
  finish(curves, curves_path);
}

void write_arm_counts_csv(std::span<const AggregateResult> results, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "policy,alpha,variant,arm,mean_pulls\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.mean_pulls.size(); ++i) {
      out << to_string(r.policy.mode) << ',' << alpha_field(r.policy) << ',' << variant_field(r.policy) << ',' << i
          << ',' << format_double(r.mean_pulls[i]) << '\n';
    }
  }
  finish(out, path);
}

void write_verification_csv(std::span<const VerificationRecord> records, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "check,parameters,estimate,stderr,bound,verdict,vacuous\n";
  for (const auto& r : records) {
    out << r.check << ',' << r.parameters << ',' << format_double(r.estimate) << ','
        << format_double(r.standard_error) << ',' << format_double(r.bound) << ',' << to_string(r.verdict) << ','
        << (r.vacuous ? "true" : "false") << '\n';
  }
  finish(out, path);
}

}  // namespace bts

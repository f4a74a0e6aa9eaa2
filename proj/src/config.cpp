#include "bts/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bts/error.hpp"

namespace bts {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits on commas that are not inside parentheses.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    }
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected a number, got '" + s + "'");
  }
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string kind;  // "", "experiment", "verification"
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

/// Runs `fn` and re-throws any ConfigError with location and key attached.
class SectionReader {
 public:
  SectionReader(const Section& s, const std::string& source) : s_(s), source_(source) {}

  bool has(const std::string& key) const { return s_.entries.contains(key); }

  template <class Fn>
  auto get(const std::string& key, Fn&& fn) const {
    used_.insert(key);
    const auto& e = s_.entries.at(key);
    try {
      return fn(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(source_ + ":" + std::to_string(e.line) + ": key '" + key + "': " + err.what());
    }
  }

  template <class T, class Fn>
  T get_or(const std::string& key, T fallback, Fn&& fn) const {
    return has(key) ? get(key, fn) : fallback;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = s_.entries.find(key);
    const int line = it == s_.entries.end() ? s_.line : it->second.line;
    throw ConfigError(source_ + ":" + std::to_string(line) + ": key '" + key + "': " + what);
  }

  void reject_unknown() const {
    for (const auto& [key, e] : s_.entries) {
      if (!used_.contains(key)) {
        throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  const Section& s_;
  const std::string& source_;
  mutable std::set<std::string> used_;
};

std::vector<double> to_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_top_level(s)) {
    out.push_back(to_double(item));
  }
  return out;
}

std::vector<std::int64_t> to_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& item : split_top_level(s)) {
    out.push_back(to_int(item));
  }
  return out;
}

Variant to_variant(const std::string& s) {
  if (s == "skip") {
    return Variant::skip;
  }
  if (s == "full") {
    return Variant::full;
  }
  throw ConfigError("variant must be 'skip' or 'full', got '" + s + "'");
}

std::int64_t positive(std::int64_t v, const char* what) {
  if (v < 1) {
    throw ConfigError(std::string(what) + " must be at least 1");
  }
  return v;
}

std::vector<Section> tokenize(std::istream& in, const std::string& source) {
  std::vector<Section> sections(1);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + "unterminated section header");
      }
      std::istringstream header(line.substr(1, line.size() - 2));
      Section s;
      s.line = line_no;
      header >> s.kind >> s.name;
      std::string extra;
      if (header >> extra) {
        throw ConfigError(where + "section header has too many words");
      }
      if (s.kind == "experiment") {
        if (s.name.empty()) {
          throw ConfigError(where + "experiment section needs a name");
        }
      } else if (s.kind == "verification") {
        if (!s.name.empty()) {
          throw ConfigError(where + "verification section takes no name");
        }
      } else {
        throw ConfigError(where + "unknown section '" + s.kind + "'");
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(where + "empty key or value");
    }
    auto& entries = sections.back().entries;
    if (entries.contains(key)) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    entries.emplace(key, Entry{value, line_no});
  }
  return sections;
}

std::vector<PolicyConfig> read_policies(const SectionReader& r) {
  const auto names = r.get_or<std::vector<std::string>>("policies", {"batched_ts"}, split_top_level);
  const auto alphas = r.get_or<std::vector<double>>("alpha", {2.0}, to_double_list);
  const double sigma2 = r.get_or<double>("sigma2", 1.0, to_double);
  const auto variants = r.get_or<std::vector<Variant>>("variant", {Variant::full}, [](const std::string& s) {
    std::vector<Variant> out;
    for (const auto& item : split_top_level(s)) {
      out.push_back(to_variant(item));
    }
    return out;
  });

  std::vector<PolicyConfig> out;
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      r.fail("policies", "policy '" + name + "' listed twice");
    }
    if (name == "batched_ts") {
      for (double a : alphas) {
        for (Variant v : variants) {
          PolicyConfig p{PolicyMode::batched, a, sigma2, v};
          try {
            p.validate();
          } catch (const ConfigError& e) {
            r.fail(e.what() == std::string("sigma2 must be positive") ? "sigma2" : "alpha", e.what());
          }
          out.push_back(p);
        }
      }
    } else if (name == "classical_ts") {
      PolicyConfig p{PolicyMode::classical, 1.0, sigma2, Variant::full};
      try {
        p.validate();
      } catch (const ConfigError& e) {
        r.fail("sigma2", e.what());
      }
      out.push_back(p);
    } else {
      r.fail("policies", "unknown policy '" + name + "' (expected batched_ts or classical_ts)");
    }
  }
  return out;
}

Experiment read_experiment(const Section& s, const std::string& source) {
  SectionReader r(s, source);
  if (!r.has("arms")) {
    r.fail("arms", "experiment '" + s.name + "' is missing required key");
  }
  if (!r.has("horizon")) {
    r.fail("horizon", "experiment '" + s.name + "' is missing required key");
  }
  auto environment = r.get("arms", [](const std::string& v) { return EnvironmentSpec(parse_arm_list(v)); });
  Experiment e{s.name, std::move(environment), 2, 1, 1, 0, std::nullopt, {}};
  e.horizon = r.get("horizon", [](const std::string& v) {
    const auto h = to_int(v);
    if (h < 2) {
      throw ConfigError("horizon must be at least 2");
    }
    return h;
  });
  e.replications = r.get_or<std::int64_t>("replications", 1, [](const std::string& v) {
    return positive(to_int(v), "replications");
  });
  e.trace_stride = r.get_or<std::int64_t>("trace_stride", std::max<std::int64_t>(1, e.horizon / 1000),
                                          [](const std::string& v) { return positive(to_int(v), "trace_stride"); });
  e.trace_replications = r.get_or<std::int64_t>("trace_replications", 0, [&](const std::string& v) {
    const auto n = to_int(v);
    if (n < 0 || n > e.replications) {
      throw ConfigError("trace_replications must lie in [0, replications]");
    }
    return n;
  });
  if (r.has("seed")) {
    e.seed = r.get("seed", to_u64);
  }
  e.policies = read_policies(r);
  r.reject_unknown();
  return e;
}

VerificationSettings read_verification(const Section& s, const std::string& source) {
  SectionReader r(s, source);
  VerificationSettings v;
  if (r.has("arms")) {
    v.arms = r.get("arms", [](const std::string& text) {
      auto arms = parse_arm_list(text);
      EnvironmentSpec env(arms);
      if (!env.bounded()) {
        throw ConfigError("verification needs [0, 1]-bounded arms");
      }
      return arms;
    });
  }
  v.policy.alpha = r.get_or<double>("alpha", v.policy.alpha, to_double);
  v.policy.sigma2 = r.get_or<double>("sigma2", v.policy.sigma2, to_double);
  v.policy.variant = r.get_or<Variant>("variant", v.policy.variant, to_variant);
  try {
    v.policy.validate();
  } catch (const ConfigError& e) {
    r.fail(std::string(e.what()).starts_with("alpha") ? "alpha" : "sigma2", e.what());
  }
  auto pos = [](const char* what) { return [what](const std::string& x) { return positive(to_int(x), what); }; };
  v.replications = r.get_or<std::int64_t>("replications", v.replications, pos("replications"));
  v.martingale_horizon = r.get_or<std::int64_t>("martingale_horizon", v.martingale_horizon, pos("martingale_horizon"));
  v.checkpoints = r.get_or<std::vector<std::int64_t>>("checkpoints", v.checkpoints, to_int_list);
  v.lambdas = r.get_or<std::vector<double>>("lambdas", v.lambdas, to_double_list);
  v.tail_horizon = r.get_or<std::int64_t>("tail_horizon", v.tail_horizon, pos("tail_horizon"));
  v.tail_visit = r.get_or<std::int64_t>("tail_visit", v.tail_visit, pos("tail_visit"));
  v.tail_x = r.get_or<std::vector<double>>("tail_x", v.tail_x, to_double_list);
  v.misestimation_horizon =
      r.get_or<std::int64_t>("misestimation_horizon", v.misestimation_horizon, pos("misestimation_horizon"));
  v.misestimation_t = r.get_or<std::int64_t>("misestimation_t", v.misestimation_t, pos("misestimation_t"));
  v.diagnostic_constant = r.get_or<double>("diagnostic_constant", v.diagnostic_constant, to_double);
  v.mgf_samples = r.get_or<std::int64_t>("mgf_samples", v.mgf_samples, pos("mgf_samples"));

  for (auto t : v.checkpoints) {
    if (t < 1 || t > v.martingale_horizon) {
      r.fail("checkpoints", "checkpoints must lie in [1, martingale_horizon]");
    }
  }
  if (v.martingale_horizon < 2 || v.tail_horizon < 2 || v.misestimation_horizon < 2) {
    r.fail("martingale_horizon", "verification horizons must be at least 2");
  }
  if (v.tail_visit < 2) {
    r.fail("tail_visit", "tail_visit must exceed 1");
  }
  if (v.misestimation_t > v.misestimation_horizon) {
    r.fail("misestimation_t", "misestimation_t must not exceed misestimation_horizon");
  }
  for (double x : v.tail_x) {
    if (!(x >= 0.0)) {
      r.fail("tail_x", "tail_x values must be non-negative");
    }
  }
  r.reject_unknown();
  return v;
}

ExperimentFile build(std::istream& in, const std::string& source) {
  const auto sections = tokenize(in, source);
  ExperimentFile file;
  file.source = source;

  SectionReader global(sections.front(), source);
  file.master_seed = global.get_or<std::uint64_t>("seed", 0, to_u64);
  file.output_dir = global.get_or<std::string>("out", "results", [](const std::string& v) { return v; });
  file.threads = global.get_or<unsigned>("threads", 1, [](const std::string& v) {
    const auto n = to_int(v);
    if (n < 0 || n > 4096) {
      throw ConfigError("threads must lie in [0, 4096]");
    }
    return static_cast<unsigned>(n);
  });
  global.reject_unknown();

  bool have_verification = false;
  std::set<std::string> names;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    const auto& s = sections[i];
    if (s.kind == "verification") {
      if (have_verification) {
        throw ConfigError(source + ":" + std::to_string(s.line) + ": duplicate verification section");
      }
      have_verification = true;
      file.verification = read_verification(s, source);
      continue;
    }
    if (!names.insert(s.name).second) {
      throw ConfigError(source + ":" + std::to_string(s.line) + ": duplicate experiment name '" + s.name + "'");
    }
    file.experiments.push_back(read_experiment(s, source));
  }
  return file;
}

}  // namespace

RunConfig ExperimentFile::run_config(const Experiment& e, const PolicyConfig& p) const {
  return RunConfig{e.environment, p, e.horizon, e.replications, e.seed.value_or(master_seed), e.trace_stride};
}

std::vector<ArmSpec> parse_arm_list(const std::string& text) {
  std::vector<ArmSpec> arms;
  for (const auto& item : split_top_level(text)) {
    std::string spec = item;
    std::int64_t repeat = 1;
    const auto close = spec.rfind(')');
    const auto star = spec.find('*', close == std::string::npos ? 0 : close);
    if (star != std::string::npos) {
      repeat = to_int(trim(spec.substr(star + 1)));
      if (repeat < 1) {
        throw ConfigError("arm repeat count must be at least 1");
      }
      spec = trim(spec.substr(0, star));
    }
    const auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')') {
      throw ConfigError("expected bernoulli(p) or gaussian(mean, variance), got '" + item + "'");
    }
    std::string kind = trim(spec.substr(0, open));
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
    std::vector<double> params;
    for (const auto& p : split_top_level(spec.substr(open + 1, spec.size() - open - 2))) {
      params.push_back(to_double(p));
    }
    std::optional<ArmSpec> arm;
    if (kind == "bernoulli" && params.size() == 1) {
      arm = ArmSpec::bernoulli(params[0]);
    } else if (kind == "gaussian" && params.size() == 2) {
      arm = ArmSpec::gaussian(params[0], params[1]);
    } else {
      throw ConfigError("expected bernoulli(p) or gaussian(mean, variance), got '" + item + "'");
    }
    for (std::int64_t n = 0; n < repeat; ++n) {
      arms.push_back(*arm);
    }
  }
  return arms;
}

ExperimentFile parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  return build(in, path.string());
}

ExperimentFile parse_config_text(const std::string& text, const std::string& source_name) {
  std::istringstream in(text);
  return build(in, source_name);
}

}  // namespace bts

#include "bts/bts.h"

#include <cmath>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>

#include "bts/config.hpp"
#include "bts/cycle_batch.hpp"
#include "bts/error.hpp"
#include "bts/runner.hpp"
#include "bts/verification.hpp"

struct bts_experiment_file {
  bts::ExperimentFile file;
};

namespace {

thread_local std::string last_error;

bts_status fail(bts_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class Fn>
bts_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const bts::ConfigError& e) {
    return fail(BTS_ERR_CONFIG, e.what());
  } catch (const bts::InvariantViolation& e) {
    return fail(BTS_ERR_INVARIANT, e.what());
  } catch (const bts::ContractViolation& e) {
    return fail(BTS_ERR_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(BTS_ERR_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(BTS_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(BTS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BTS_ERR_INTERNAL, "unknown error");
  }
}

bts::RunnerOptions runner_options(const char* experiment, int threads, int verbose) {
  bts::RunnerOptions opts;
  if (threads >= 0) {
    opts.threads = static_cast<unsigned>(threads);
  }
  if (experiment != nullptr) {
    opts.experiment = experiment;
  }
  if (verbose != 0) {
    opts.log = &std::cerr;
  }
  return opts;
}

}  // namespace

extern "C" {

const char* bts_version(void) { return "1.0.0"; }

const char* bts_last_error(void) { return last_error.c_str(); }

bts_status bts_config_load(const char* path, bts_experiment_file** out) {
  if (path == nullptr || out == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_config_load: null argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<bts_experiment_file>(bts_experiment_file{bts::parse_config(path)});
    *out = handle.release();
    return BTS_OK;
  });
}

void bts_config_free(bts_experiment_file* file) { delete file; }

bts_status bts_config_set_seed(bts_experiment_file* file, uint64_t seed) {
  if (file == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_config_set_seed: null handle");
  }
  file->file.master_seed = seed;
  // An explicit seed replaces per-experiment seeds too.
  for (auto& e : file->file.experiments) {
    e.seed.reset();
  }
  return BTS_OK;
}

bts_status bts_config_set_output_dir(bts_experiment_file* file, const char* dir) {
  if (file == nullptr || dir == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_config_set_output_dir: null argument");
  }
  file->file.output_dir = dir;
  return BTS_OK;
}

bts_status bts_config_experiment_count(const bts_experiment_file* file, size_t* count) {
  if (file == nullptr || count == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_config_experiment_count: null argument");
  }
  *count = file->file.experiments.size();
  return BTS_OK;
}

bts_status bts_config_experiment_name(const bts_experiment_file* file, size_t index, const char** name) {
  if (file == nullptr || name == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_config_experiment_name: null argument");
  }
  if (index >= file->file.experiments.size()) {
    return fail(BTS_ERR_ARGUMENT, "bts_config_experiment_name: index out of range");
  }
  *name = file->file.experiments[index].name.c_str();
  return BTS_OK;
}

bts_status bts_run_experiments(const bts_experiment_file* file, const char* experiment, int threads, int verbose) {
  if (file == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_run_experiments: null handle");
  }
  return guarded([&] {
    bts::run_experiments(file->file, runner_options(experiment, threads, verbose));
    return BTS_OK;
  });
}

bts_status bts_run_verification(const bts_experiment_file* file, int threads, int verbose, size_t* failed_checks) {
  if (file == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_run_verification: null handle");
  }
  return guarded([&] {
    const auto rows = bts::run_verification_suite(file->file, runner_options(nullptr, threads, verbose));
    size_t failed = 0;
    std::string first;
    for (const auto& r : rows) {
      if (r.verdict == bts::Verdict::fail) {
        if (failed++ == 0) {
          first = r.check + " (" + r.parameters + ")";
        }
      }
    }
    if (failed_checks != nullptr) {
      *failed_checks = failed;
    }
    if (failed > 0) {
      return fail(BTS_ERR_INVARIANT, std::to_string(failed) + " verification check(s) failed, first: " + first);
    }
    return BTS_OK;
  });
}

bts_status bts_q_function(double x, double* out) {
  if (out == nullptr || !std::isfinite(x)) {
    return fail(BTS_ERR_ARGUMENT, "bts_q_function: x must be finite and out non-null");
  }
  *out = bts::q_function(x);
  return BTS_OK;
}

bts_status bts_q_inverse(double p, double* out) {
  if (out == nullptr) {
    return fail(BTS_ERR_ARGUMENT, "bts_q_inverse: null output");
  }
  return guarded([&] {
    *out = bts::q_inverse(p);
    return BTS_OK;
  });
}

bts_status bts_batch_count_bound(size_t num_arms, double alpha, int64_t horizon, double* out) {
  if (out == nullptr || num_arms < 2 || !(alpha > 1.0) || horizon < 1) {
    return fail(BTS_ERR_ARGUMENT, "bts_batch_count_bound: need K >= 2, alpha > 1, T >= 1");
  }
  *out = bts::batch_count_bound(num_arms, alpha, horizon);
  return BTS_OK;
}

}  // extern "C"

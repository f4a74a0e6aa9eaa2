// Command-line front end. Talks to the library only through the C interface.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bts/bts.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

int exit_code(bts_status status) {
  switch (status) {
    case BTS_OK:
      return kExitOk;
    case BTS_ERR_INVARIANT:
      return kExitInvariant;
    default:
      return kExitConfig;
  }
}

int report(bts_status status) {
  if (status != BTS_OK) {
    std::cerr << "error: " << bts_last_error() << '\n';
  }
  return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batched Thompson sampling experiments and verification"};
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string experiment;
  int threads = -1;
  bool verify = false;
  bool quiet = false;

  app.add_option("--config", config_path, "Experiment file")->required();
  app.add_option("--out", out_dir, "Output directory (overrides the file)");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the file)");
  auto* exp_opt = app.add_option("--experiment", experiment, "Run only this experiment");
  app.add_option("--threads", threads, "Worker threads; 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_flag("--verify", verify, "Run the verification suite instead of the experiments");
  app.add_flag("-q,--quiet", quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  bts_experiment_file* file = nullptr;
  if (const auto st = bts_config_load(config_path.c_str(), &file); st != BTS_OK) {
    return report(st);
  }
  int code = kExitOk;
  if (*seed_opt) {
    bts_config_set_seed(file, seed);
  }
  if (!out_dir.empty()) {
    bts_config_set_output_dir(file, out_dir.c_str());
  }
  if (verify) {
    size_t failed = 0;
    code = report(bts_run_verification(file, threads, quiet ? 0 : 1, &failed));
  } else {
    code = report(bts_run_experiments(file, *exp_opt ? experiment.c_str() : nullptr, threads, quiet ? 0 : 1));
  }
  bts_config_free(file);
  return code;
}

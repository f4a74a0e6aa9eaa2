#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "bts/bts.h"

namespace {

namespace fs = std::filesystem;

const std::string kSmall = std::string(BTS_TEST_SOURCE_DIR) + "/tests/data/small.toml";

struct FileHandle {
  bts_experiment_file* ptr = nullptr;
  ~FileHandle() { bts_config_free(ptr); }
};

TEST(CApi, Version) { EXPECT_STREQ(bts_version(), "1.0.0"); }

TEST(CApi, MissingConfig) {
  bts_experiment_file* file = nullptr;
  EXPECT_EQ(bts_config_load("/nonexistent/missing.toml", &file), BTS_ERR_CONFIG);
  EXPECT_EQ(file, nullptr);
  EXPECT_NE(std::string(bts_last_error()).find("cannot open config file"), std::string::npos);
}

TEST(CApi, BadAlphaIsConfigError) {
  FileHandle h;
  const std::string path = std::string(BTS_TEST_SOURCE_DIR) + "/tests/data/bad_alpha.toml";
  EXPECT_EQ(bts_config_load(path.c_str(), &h.ptr), BTS_ERR_CONFIG);
  EXPECT_NE(std::string(bts_last_error()).find("alpha must exceed 1"), std::string::npos);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(bts_config_load(nullptr, nullptr), BTS_ERR_ARGUMENT);
  size_t n = 0;
  EXPECT_EQ(bts_config_experiment_count(nullptr, &n), BTS_ERR_ARGUMENT);
  EXPECT_EQ(bts_run_experiments(nullptr, nullptr, 1, 0), BTS_ERR_ARGUMENT);
  EXPECT_EQ(bts_q_function(0.0, nullptr), BTS_ERR_ARGUMENT);
  bts_config_free(nullptr);
}

TEST(CApi, NumericHelpers) {
  double q = 0.0;
  ASSERT_EQ(bts_q_function(0.0, &q), BTS_OK);
  EXPECT_EQ(q, 0.5);
  ASSERT_EQ(bts_q_inverse(0.5, &q), BTS_OK);
  EXPECT_EQ(q, 0.0);
  EXPECT_EQ(bts_q_inverse(1.5, &q), BTS_ERR_ARGUMENT);
  double b = 0.0;
  ASSERT_EQ(bts_batch_count_bound(2, 2.0, 8, &b), BTS_OK);
  EXPECT_DOUBLE_EQ(b, 1.0 + 2.0 + 2.0 * 2.0);
  EXPECT_EQ(bts_batch_count_bound(2, 1.0, 8, &b), BTS_ERR_ARGUMENT);
}

TEST(CApi, ExperimentNamesAndRun) {
  FileHandle h;
  ASSERT_EQ(bts_config_load(kSmall.c_str(), &h.ptr), BTS_OK) << bts_last_error();
  size_t n = 0;
  ASSERT_EQ(bts_config_experiment_count(h.ptr, &n), BTS_OK);
  ASSERT_EQ(n, 2u);
  const char* name = nullptr;
  ASSERT_EQ(bts_config_experiment_name(h.ptr, 0, &name), BTS_OK);
  EXPECT_STREQ(name, "two_arms");
  ASSERT_EQ(bts_config_experiment_name(h.ptr, 1, &name), BTS_OK);
  EXPECT_STREQ(name, "five_gaussian");
  EXPECT_EQ(bts_config_experiment_name(h.ptr, 2, &name), BTS_ERR_ARGUMENT);

  const auto out = fs::temp_directory_path() / "bts_c_api_run";
  fs::remove_all(out);
  ASSERT_EQ(bts_config_set_output_dir(h.ptr, out.string().c_str()), BTS_OK);
  ASSERT_EQ(bts_config_set_seed(h.ptr, 99), BTS_OK);
  ASSERT_EQ(bts_run_experiments(h.ptr, "five_gaussian", 2, 0), BTS_OK) << bts_last_error();
  EXPECT_TRUE(fs::exists(out / "five_gaussian" / "aggregate.csv"));
  EXPECT_FALSE(fs::exists(out / "two_arms"));
  EXPECT_EQ(bts_run_experiments(h.ptr, "missing", 1, 0), BTS_ERR_CONFIG);
}

}  // namespace

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bts/error.hpp"
#include "bts/verification.hpp"

namespace bts {
namespace {

using boost::multiprecision::cpp_bin_float_50;

double oracle_q(double x) {
  const cpp_bin_float_50 z = cpp_bin_float_50(x) / boost::multiprecision::sqrt(cpp_bin_float_50(2));
  return static_cast<double>(boost::multiprecision::erfc(z) / 2);
}

RunConfig bernoulli_run(std::int64_t horizon, std::int64_t reps, std::uint64_t seed, double p1 = 0.75,
                        double p2 = 0.25) {
  return RunConfig{EnvironmentSpec({ArmSpec::bernoulli(p1), ArmSpec::bernoulli(p2)}),
                   PolicyConfig{PolicyMode::batched, 2.0, 1.0, Variant::skip},
                   horizon,
                   reps,
                   seed,
                   horizon};
}

TEST(QFunction, SymmetryAndCentre) {
  EXPECT_EQ(q_function(0.0), 0.5);
  for (double x = -8.0; x <= 8.0; x += 0.125) {
    EXPECT_NEAR(q_function(x) + q_function(-x), 1.0, 1e-12) << x;
  }
}

TEST(QFunction, StrictlyDecreasing) {
  // Below -5, 1 - Q(x) falls under the spacing of doubles near 1.
  double prev = q_function(-5.0);
  for (double x = -4.99; x <= 37.0; x += 0.01) {
    const double q = q_function(x);
    ASSERT_LT(q, prev) << x;
    prev = q;
  }
}

TEST(QFunction, MatchesHighPrecisionOracle) {
  for (double x = 1e-6; x <= 8.0; x *= 1.07) {
    const double ref = oracle_q(x);
    EXPECT_LE(std::abs(q_function(x) - ref) / ref, 1e-12) << x;
  }
  EXPECT_LE(std::abs(q_function(8.0) - oracle_q(8.0)) / oracle_q(8.0), 1e-12);
}

TEST(QFunction, TailSandwichOnGrid) {
  const auto grid = open_grid(10.0, 1000);
  ASSERT_EQ(grid.size(), 1000u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.01);
  EXPECT_DOUBLE_EQ(grid.back(), 10.0);
  const auto report = tail_sandwich_check(grid);
  EXPECT_TRUE(report.pass) << report.worst_margin;
  for (const auto& p : report.points) {
    EXPECT_TRUE(p.pass) << p.delta;
  }
}

TEST(QFunction, BoundsAtKnownPoints) {
  const double phi1 = std::exp(-0.5) / std::sqrt(2.0 * M_PI);
  EXPECT_NEAR(tail_upper_bound(1.0), phi1, 1e-15);
  EXPECT_EQ(tail_lower_bound(1.0), 0.0);
  EXPECT_LT(tail_lower_bound(0.5), 0.0);
}

TEST(QInverse, RoundTrip) {
  for (double p : {1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.25, 0.4, 0.5}) {
    EXPECT_NEAR(q_function(q_inverse(p)), p, 1e-10 * std::max(p, 1e-6)) << p;
  }
  EXPECT_EQ(q_inverse(0.5), 0.0);
  EXPECT_NEAR(q_inverse(q_function(1.96)), 1.96, 1e-8);
  EXPECT_NEAR(q_inverse(0.975), -1.959963984540054, 1e-8);
}

TEST(QInverse, DomainErrors) {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_THROW(q_inverse(p), std::domain_error) << p;
  }
}

TEST(QInverse, TailFloorEventuallyHolds) {
  std::vector<double> xs;
  for (double e = 0.1; e <= 12.0 + 1e-9; e += 0.01) {
    xs.push_back(std::pow(10.0, e));
  }
  const auto report = inverse_tail_check(xs);
  ASSERT_TRUE(report.x0.has_value());
  EXPECT_TRUE(report.holds_beyond_x0);
  EXPECT_GT(*report.x0, 100.0);
  EXPECT_LT(*report.x0, 2000.0);
}

TEST(Hoeffding, ExactValues) {
  EXPECT_EQ(bernoulli_centered_mgf(0.3, 0.0), 1.0);
  EXPECT_NEAR(bernoulli_centered_mgf(0.5, 2.0), std::cosh(1.0), 1e-15);
  EXPECT_LE(bernoulli_centered_mgf(0.5, 2.0), std::exp(0.5));
  EXPECT_LE(bernoulli_centered_mgf(0.9, -3.0), std::exp(9.0 / 8.0));
  EXPECT_DOUBLE_EQ(hoeffding_bound(2.0), std::exp(0.5));
}

TEST(Hoeffding, ExactGridPasses) {
  std::vector<double> lambdas;
  for (double l = -5.0; l <= 5.0; l += 0.5) {
    lambdas.push_back(l);
  }
  for (double p = 0.1; p < 0.95; p += 0.1) {
    EXPECT_TRUE(hoeffding_mgf_exact(ArmSpec::bernoulli(p), lambdas).pass) << p;
  }
}

TEST(Hoeffding, MonteCarloPasses) {
  const std::vector<double> lambdas = {-2.0, -0.5, 0.0, 0.5, 2.0};
  const auto report = hoeffding_mgf_check(ArmSpec::bernoulli(0.3), lambdas, 50000, 17);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.points[2].estimate, 1.0);
  EXPECT_EQ(report.points[2].standard_error, 0.0);
}

TEST(Hoeffding, RejectsUnboundedArm) {
  const std::vector<double> lambdas = {1.0};
  EXPECT_THROW(hoeffding_mgf_exact(ArmSpec::gaussian(0.0, 1.0), lambdas), ContractViolation);
  EXPECT_THROW(hoeffding_mgf_check(ArmSpec::gaussian(0.0, 1.0), lambdas, 10, 1), ContractViolation);
}

TEST(Supermartingale, ZeroLambdaAndFirstStep) {
  const auto config = bernoulli_run(200, 300, 5);
  const std::vector<double> lambdas = {0.0, 1.0, -1.0};
  const std::vector<std::int64_t> checkpoints = {1, 50, 200};
  const auto est = supermartingale_check(config, 1, lambdas, checkpoints, 2);
  ASSERT_EQ(est.size(), 3u);
  for (const auto& p : est[0].points) {
    EXPECT_EQ(p.mean, 1.0);
    EXPECT_EQ(p.standard_error, 0.0);
  }
  for (const auto& e : est) {
    // Nothing is frozen before the first batch end.
    EXPECT_NEAR(e.points[0].mean, std::exp(-e.lambda * e.lambda / 8.0), 1e-12);
    EXPECT_LT(e.points[0].standard_error, 1e-12);
    EXPECT_TRUE(e.pass);
  }
}

TEST(Supermartingale, RejectsUnsupportedSetups) {
  const std::vector<std::int64_t> checkpoints = {10};
  auto config = bernoulli_run(100, 10, 1);
  EXPECT_THROW(supermartingale_check(config, 1, 1.0, std::span<const std::int64_t>(std::vector<std::int64_t>{0})),
               ContractViolation);
  config.policy.mode = PolicyMode::classical;
  EXPECT_THROW(supermartingale_check(config, 1, 1.0, checkpoints), ContractViolation);
  config = bernoulli_run(100, 10, 1);
  config.environment = EnvironmentSpec({ArmSpec::gaussian(0, 1), ArmSpec::gaussian(1, 1)});
  EXPECT_THROW(supermartingale_check(config, 1, 1.0, checkpoints), ContractViolation);
}

TEST(Misestimation, UnitGapEligibleAndBounded) {
  const auto config = bernoulli_run(2000, 200, 3, 1.0, 0.0);
  const auto report = misestimation_check(config, 1, 2000, 32.0, 2);
  EXPECT_NEAR(report.threshold, 32.0 * std::log(2000.0), 1e-9);
  EXPECT_TRUE(report.best_arm_low.asserted);
  EXPECT_TRUE(report.pass);
}

TEST(Misestimation, VacuousWhenCountsNeverReachThreshold) {
  const auto config = bernoulli_run(1000, 100, 3);
  const auto report = misestimation_check(config, 1, 200, 32.0);
  EXPECT_TRUE(report.best_arm_low.vacuous);
  EXPECT_TRUE(report.arm_high.vacuous);
  EXPECT_EQ(report.best_arm_low.frequency, 0.0);
  EXPECT_TRUE(report.pass);
  const auto tiny = misestimation_check(bernoulli_run(50, 20, 3), 1, 50, 32.0);
  EXPECT_TRUE(tiny.arm_high.vacuous);
}

TEST(Misestimation, SmallConstantIsReportOnly) {
  const auto report = misestimation_check(bernoulli_run(1000, 100, 3), 1, 1000, 1.0);
  EXPECT_FALSE(report.best_arm_low.asserted);
  EXPECT_FALSE(report.arm_high.asserted);
  EXPECT_TRUE(report.pass);
}

TEST(Misestimation, RejectsBestArm) {
  EXPECT_THROW(misestimation_check(bernoulli_run(100, 10, 1), 0, 50), ContractViolation);
  EXPECT_THROW(misestimation_check(bernoulli_run(100, 10, 1), 1, 101), ContractViolation);
}

TEST(StoppedTail, EdgeCases) {
  const std::vector<double> xs = {0.0, 50.0};
  const auto report = stopped_tail_check(bernoulli_run(2000, 200, 9), 1, 3, xs, 2);
  ASSERT_EQ(report.points.size(), 2u);
  EXPECT_EQ(report.points[0].upper.bound, 1.0);
  EXPECT_EQ(report.points[1].upper.frequency, 0.0);
  EXPECT_EQ(report.points[1].lower.frequency, 0.0);
  EXPECT_GT(report.reached, 0);
  EXPECT_TRUE(report.pass);
}

TEST(StoppedTail, RejectsBadArguments) {
  const std::vector<double> xs = {1.0};
  const std::vector<double> negative = {-1.0};
  auto config = bernoulli_run(100, 10, 1);
  EXPECT_THROW(stopped_tail_check(config, 1, 1, xs), ContractViolation);
  EXPECT_THROW(stopped_tail_check(config, 1, 3, negative), ContractViolation);
  config.environment = EnvironmentSpec({ArmSpec::gaussian(0, 1), ArmSpec::gaussian(1, 1)});
  EXPECT_THROW(stopped_tail_check(config, 1, 3, xs), ContractViolation);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::pass), "pass");
  EXPECT_EQ(to_string(Verdict::fail), "fail");
  EXPECT_EQ(to_string(Verdict::report_only), "report");
}

}  // namespace
}  // namespace bts

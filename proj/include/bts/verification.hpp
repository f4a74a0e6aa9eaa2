#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bts/environment.hpp"
#include "bts/simulator.hpp"

namespace bts {

/// Standard normal upper tail P(X >= x).
double q_function(double x);

/// Inverse of q_function on (0, 1). Throws std::domain_error outside.
double q_inverse(double p);

/// Number of standard errors a Monte Carlo estimate must exceed a bound by
/// before the bound counts as violated.
inline constexpr double kViolationSigmas = 3.0;

/// Lower and upper Gaussian tail bounds (1/d - 1/d^3) φ(d) and φ(d)/d, d > 0.
double tail_lower_bound(double delta);
double tail_upper_bound(double delta);

struct TailPoint {
  double delta = 0.0;
  double lower = 0.0;
  double q = 0.0;
  double upper = 0.0;
  bool pass = false;
};

struct TailCheckReport {
  std::vector<TailPoint> points;
  double slack = 0.0;
  /// min over the grid of min(q - lower, upper - q); negative means a breach.
  double worst_margin = 0.0;
  bool pass = false;
};

/// n evenly spaced points hi/n, 2 hi/n, ..., hi.
std::vector<double> open_grid(double hi, std::size_t n);

TailCheckReport tail_sandwich_check(std::span<const double> deltas, double slack = 1e-12);

/// Where Q^{-1}(1/x) >= sqrt((4/3) log x) starts to hold on a grid.
struct InverseTailReport {
  std::vector<double> x;
  std::vector<double> q_inv;
  std::vector<double> floor;
  /// Smallest grid x from which the inequality holds at every later grid point.
  std::optional<double> x0;
  /// Failures never reappear after the first success.
  bool holds_beyond_x0 = false;
};

InverseTailReport inverse_tail_check(std::span<const double> x_grid);

/// E[exp(λ(X − p))] for X ~ Bernoulli(p), evaluated exactly.
double bernoulli_centered_mgf(double p, double lambda);

/// exp(λ² (b − a)² / 8).
double hoeffding_bound(double lambda, double width = 1.0);

struct MgfPoint {
  double lambda = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct MgfReport {
  ArmSpec arm;
  std::int64_t samples = 0;
  std::vector<MgfPoint> points;
  bool pass = false;
};

/// Monte Carlo estimate of E[exp(λ(X − EX))] against the Hoeffding bound for
/// a [0, 1]-bounded arm. Unbounded arms are rejected.
MgfReport hoeffding_mgf_check(const ArmSpec& arm, std::span<const double> lambdas, std::int64_t samples,
                              std::uint64_t seed);

/// Same check with the exact two-point expectation in place of sampling.
MgfReport hoeffding_mgf_exact(const ArmSpec& arm, std::span<const double> lambdas);

struct MartingalePoint {
  std::int64_t t = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};

struct MartingaleEstimate {
  double lambda = 0.0;
  std::size_t arm = 0;
  std::int64_t replications = 0;
  std::vector<MartingalePoint> points;
  bool pass = false;
};

/// Estimates E[X_t] for
///   X_t = exp(λ(S_i − μ_i M_i) − (λ²/8)(1 + M_i)),
/// where S_i, M_i are the cycle-boundary reward sum and cycle count frozen at
/// the last batch end before t. Passes when mean − 3 stderr <= 1 at every
/// checkpoint. All λ share the same simulated episodes.
std::vector<MartingaleEstimate> supermartingale_check(const RunConfig& config, std::size_t arm,
                                                      std::span<const double> lambdas,
                                                      std::span<const std::int64_t> checkpoints, unsigned threads = 1);

MartingaleEstimate supermartingale_check(const RunConfig& config, std::size_t arm, double lambda,
                                         std::span<const std::int64_t> checkpoints, unsigned threads = 1);

/// Empirical frequency of an event against a probability bound.
struct FrequencyCheck {
  double frequency = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  /// Replications in which the conditioning part of the event could occur.
  std::int64_t eligible = 0;
  bool vacuous = false;
  bool asserted = true;
  bool pass = false;
};

struct MisestimationReport {
  std::size_t best_arm = 0;
  std::size_t arm = 0;
  std::int64_t t = 0;
  std::int64_t horizon = 0;
  double constant = 32.0;
  double threshold = 0.0;  // constant σ² log T / Δ²
  std::int64_t replications = 0;
  FrequencyCheck best_arm_low;  // θ_best(t) <= (μ_best + μ_i)/2 with M_best >= threshold
  FrequencyCheck arm_high;      // θ_i(t) > (μ_best + μ_i)/2 with M_i >= threshold
  bool pass = false;
};

/// Misestimation probabilities at step t (t <= config.horizon; the horizon
/// enters only through log T). The bound 2/T is asserted only for
/// constant >= 32 and sigma2 >= 1; checks whose count condition never held are
/// labelled vacuous.
MisestimationReport misestimation_check(const RunConfig& config, std::size_t arm, std::int64_t t,
                                        double constant = 32.0, unsigned threads = 1);

struct StoppedTailPoint {
  double x = 0.0;
  FrequencyCheck upper;  // Z > x
  FrequencyCheck lower;  // Z < −x
};

struct StoppedTailReport {
  std::size_t arm = 0;
  std::int64_t visit = 0;
  std::int64_t replications = 0;
  /// Replications in which the visit happened before T.
  std::int64_t reached = 0;
  bool theory_regime = false;
  std::vector<StoppedTailPoint> points;
  bool pass = false;
};

/// At the j-th cycle-boundary play of arm i, Z = (S_i − μ_i M_i)/sqrt(1 + M_i)
/// with statistics frozen at the last batch end. Both tails are compared with
/// exp(−2x²/α); runs that never reach the visit count as "event did not occur".
StoppedTailReport stopped_tail_check(const RunConfig& config, std::size_t arm, std::int64_t visit,
                                     std::span<const double> x_grid, unsigned threads = 1);

enum class Verdict { pass, fail, report_only };

/// One row of the verification CSV.
struct VerificationRecord {
  std::string check;
  std::string parameters;
  double estimate = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  Verdict verdict = Verdict::pass;
  bool vacuous = false;
};

std::string_view to_string(Verdict v);

}  // namespace bts

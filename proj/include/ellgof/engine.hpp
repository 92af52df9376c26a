#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ellgof/estimators.hpp"
#include "ellgof/numerics.hpp"
#include "ellgof/samplers.hpp"
#include "ellgof/statistics.hpp"

namespace ellgof {

enum class Aggregation { mean, max };

std::string aggregation_name(Aggregation a);

/// Stream-derivation phases. Replicate streams are
/// RngStream(master_seed, derive_stream(phase, task, replicate)), so m, M
/// and the worker count can each change without perturbing other streams.
namespace stream_phase {
constexpr std::uint64_t statistic = 1;  // task 0, replicates 0..m-1
constexpr std::uint64_t bootstrap = 2;  // task j, replicates 0..m-1, pseudo-data m
constexpr std::uint64_t redraw = 3;     // one-shot retry of a failed pseudo-data draw
constexpr std::uint64_t bhep = 5;       // task j, replicate 0
}  // namespace stream_phase

/// Full test configuration. Defaults: m = 10 replicates per statistic,
/// M = 1000 resampling repetitions, 5% level, mean aggregation.
struct TestConfig {
  FamilySpec family;
  WeightKernel kernel = WeightKernel::gaussian();
  int m = 10;
  int M = 1000;
  double alpha = 0.05;
  Aggregation agg = Aggregation::mean;
  std::uint64_t seed = 0;

  explicit TestConfig(FamilySpec f) : family(std::move(f)) { validate(); }
  void validate() const;
};

struct TestOutcome {
  double statistic = 0.0;
  double critical_point = 0.0;
  double p_value = 1.0;
  bool reject = false;
  int m = 0;
  int M = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  Aggregation agg = Aggregation::mean;
  std::string family;
  std::string kernel;
  int n = 0;
  int p = 0;
  double wall_time_s = 0.0;
  int redraws = 0;  // resampling repetitions whose first draw failed estimation
};

struct BootstrapResult {
  double critical_point = 0.0;
  std::vector<double> null_stats;  // one aggregated value per repetition, in order
  int redraws = 0;
};

/// Empirical upper quantile at level 1 - alpha: the k-th order statistic
/// with k = clamp(ceil((1-alpha)(M+1)), 1, M). With the (1+count)/(M+1)
/// p-value below, rejection by "statistic > critical point" agrees with
/// "p <= alpha" except on ties at the order statistic itself. alpha = 0
/// yields the maximum.
double empirical_upper_quantile(std::vector<double> values, double alpha);

/// Monte Carlo p-value (1 + #{null >= statistic}) / (M + 1); never zero.
double mc_p_value(double statistic, std::span<const double> null_stats);

/// The test statistic: estimates theta on x, standardizes, draws m samples
/// from the family's standard member, and aggregates (mean or max) the m
/// two-sample statistic values. Streams are derived from (master_seed,
/// replicate index), so the value is reproducible bit-for-bit.
double aggregate_statistic(const Sample& x, const TestConfig& cfg,
                           std::uint64_t master_seed);

/// Null calibration: each of the M repetitions draws m + 1 fresh size-n
/// samples from the standard member, treats the last one as pseudo-data
/// (re-estimated and re-standardized exactly like real data) and aggregates
/// the statistic against the other m. The critical point is the empirical
/// (1 - alpha) quantile of the M values. A repetition whose pseudo-data
/// fails estimation is redrawn once and then errors out; redraw counts are
/// reported. Repetitions are independent and may run on several workers;
/// the result is identical for any worker count.
BootstrapResult bootstrap_critical(int n, const TestConfig& cfg,
                                   std::uint64_t master_seed,
                                   unsigned workers = 1);

/// Complete procedure: statistic, critical point, p-value, decision.
/// The whole outcome is a pure function of (x, cfg), including cfg.seed.
TestOutcome run_test(const Sample& x, const TestConfig& cfg, unsigned workers = 1);

/// BHEP test for normality with Monte Carlo calibration: the null statistics
/// are BHEP values of fresh standard normal samples of the same size.
struct BhepConfig {
  double beta = 1.0;
  int M = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

TestOutcome run_bhep_test(const Sample& x, const BhepConfig& cfg,
                          unsigned workers = 1);

}  // namespace ellgof

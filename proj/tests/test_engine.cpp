#include "ellgof/engine.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ellgof/errors.hpp"
#include "test_util.hpp"

namespace ellgof {
namespace {

using testing::random_sample;
using testing::shift_sample;

TestConfig small_config(int p = 2) {
  TestConfig cfg(FamilySpec::standard(Family::normal, p));
  cfg.m = 5;
  cfg.M = 50;
  cfg.seed = 2024080;
  return cfg;
}

TEST(Quantile, OrderStatisticConvention) {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  // k = ceil((1-alpha)(M+1)) clamped to [1, M]
  EXPECT_DOUBLE_EQ(empirical_upper_quantile(v, 0.5), 6.0);    // k = ceil(5.5)
  EXPECT_DOUBLE_EQ(empirical_upper_quantile(v, 0.05), 10.0);  // k = 11 -> 10
  EXPECT_DOUBLE_EQ(empirical_upper_quantile(v, 0.0), 10.0);   // max
  EXPECT_DOUBLE_EQ(empirical_upper_quantile({3.25}, 0.05), 3.25);
}

TEST(McPValue, Extremes) {
  const std::vector<double> nulls = {1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(mc_p_value(10.0, nulls), 1.0 / 6.0);  // above all
  EXPECT_DOUBLE_EQ(mc_p_value(0.0, nulls), 1.0);         // below all
  EXPECT_DOUBLE_EQ(mc_p_value(3.0, nulls), 4.0 / 6.0);   // ties count as >=
}

TEST(AggregateStatistic, SingleReplicateEqualsOneComposite) {
  RngStream data_rng(200, 0);
  const Sample x = random_sample(30, 2, data_rng);
  TestConfig cfg = small_config();
  cfg.m = 1;

  const double agg = aggregate_statistic(x, cfg, cfg.seed);

  // reproduce the single replicate by hand from the published stream layout
  RngStream rng(cfg.seed, derive_stream(stream_phase::statistic, 0, 0));
  const Sample x0 = sample_family(30, FamilySpec::standard(Family::normal, 2), rng);
  const auto th = moment_estimate(x, cfg.family);
  const double single = t_psi_composite(x, x0, th, cfg.kernel).value;
  EXPECT_DOUBLE_EQ(agg, single);
}

TEST(AggregateStatistic, BitReproducible) {
  RngStream data_rng(201, 0);
  const Sample x = random_sample(40, 2, data_rng);
  TestConfig cfg = small_config();
  cfg.m = 10;
  const double a = aggregate_statistic(x, cfg, cfg.seed);
  const double b = aggregate_statistic(x, cfg, cfg.seed);
  EXPECT_EQ(a, b);
}

TEST(AggregateStatistic, MaxDominatesMean) {
  RngStream data_rng(202, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Sample x = random_sample(30, 2, data_rng);
    TestConfig cfg = small_config();
    cfg.m = 10;
    cfg.seed = 777 + trial;
    cfg.agg = Aggregation::mean;
    const double mean = aggregate_statistic(x, cfg, cfg.seed);
    cfg.agg = Aggregation::max;
    const double max = aggregate_statistic(x, cfg, cfg.seed);
    ASSERT_GE(max, mean);
  }
}

TEST(BootstrapCritical, DegenerateSingleRepetition) {
  TestConfig cfg = small_config();
  cfg.M = 1;
  const auto res = bootstrap_critical(25, cfg, cfg.seed);
  ASSERT_EQ(res.null_stats.size(), 1u);
  EXPECT_DOUBLE_EQ(res.critical_point, res.null_stats[0]);
}

TEST(BootstrapCritical, AlphaZeroTakesMaximum) {
  TestConfig cfg = small_config();
  cfg.M = 40;
  cfg.alpha = 0.0;
  const auto res = bootstrap_critical(25, cfg, cfg.seed);
  EXPECT_DOUBLE_EQ(res.critical_point,
                   *std::max_element(res.null_stats.begin(), res.null_stats.end()));
}

TEST(BootstrapCritical, WorkerCountDoesNotChangeResults) {
  TestConfig cfg = small_config();
  cfg.M = 60;
  const auto serial = bootstrap_critical(25, cfg, cfg.seed, 1);
  const auto parallel = bootstrap_critical(25, cfg, cfg.seed, 4);
  ASSERT_EQ(serial.null_stats.size(), parallel.null_stats.size());
  for (std::size_t i = 0; i < serial.null_stats.size(); ++i)
    ASSERT_EQ(serial.null_stats[i], parallel.null_stats[i]);
  EXPECT_EQ(serial.critical_point, parallel.critical_point);
  EXPECT_EQ(serial.redraws, 0);
}

TEST(BootstrapCritical, RequiresEnoughObservations) {
  TestConfig cfg = small_config(4);
  EXPECT_THROW(bootstrap_critical(4, cfg, cfg.seed), config_error);
}

TEST(RunTest, OutcomeIsConsistent) {
  RngStream data_rng(203, 0);
  const Sample x = random_sample(30, 2, data_rng);
  TestConfig cfg = small_config();
  cfg.M = 99;
  const TestOutcome out = run_test(x, cfg);
  EXPECT_EQ(out.n, 30);
  EXPECT_EQ(out.p, 2);
  EXPECT_EQ(out.m, cfg.m);
  EXPECT_EQ(out.M, cfg.M);
  EXPECT_EQ(out.reject, out.statistic > out.critical_point);
  EXPECT_GT(out.p_value, 0.0);
  EXPECT_LE(out.p_value, 1.0);
  EXPECT_EQ(out.reject, out.p_value <= cfg.alpha);  // no ties at these sizes
  EXPECT_GE(out.wall_time_s, 0.0);
  EXPECT_EQ(out.family, "normal");
}

TEST(RunTest, PureFunctionOfDataAndConfig) {
  RngStream data_rng(204, 0);
  const Sample x = random_sample(25, 2, data_rng);
  TestConfig cfg = small_config();
  const TestOutcome a = run_test(x, cfg);
  const TestOutcome b = run_test(x, cfg, 3);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.critical_point, b.critical_point);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.reject, b.reject);
}

TEST(RunTest, TranslationInvariantIncludingPValue) {
  RngStream data_rng(205, 0);
  const Sample x = random_sample(30, 2, data_rng);
  const Sample xb = shift_sample(x, {25.0, -13.5});
  TestConfig cfg = small_config();
  cfg.M = 80;
  const TestOutcome a = run_test(x, cfg);
  const TestOutcome b = run_test(xb, cfg);
  EXPECT_NEAR(a.statistic, b.statistic, 1e-12);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.reject, b.reject);
}

TEST(RunBhepTest, NullIsCalibrated) {
  // Under the null the BHEP p-value should be unremarkable and the
  // machinery deterministic.
  RngStream data_rng(206, 0);
  const std::vector<double> zero(2, 0.0);
  const Sample x = sample_mvnormal(50, zero, SymPosDef::identity(2), data_rng);
  BhepConfig cfg;
  cfg.M = 200;
  cfg.seed = 99;
  const TestOutcome a = run_bhep_test(x, cfg);
  const TestOutcome b = run_bhep_test(x, cfg, 4);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_GT(a.p_value, 0.001);
}

TEST(RunBhepTest, RejectsObviousNonNormality) {
  RngStream data_rng(207, 0);
  const Sample x =
      sample_alternative(100, 2, AltSpec::uniform_cube(), data_rng);
  BhepConfig cfg;
  cfg.M = 300;
  cfg.seed = 7;
  const TestOutcome out = run_bhep_test(x, cfg);
  EXPECT_TRUE(out.reject);
}

// p-values under the null should be close to uniform; checked with a
// Kolmogorov-Smirnov distance over 200 independent trials.
TEST(RunTest, NullPValuesAreUniform) {
  const int trials = 200;
  std::vector<double> pvalues(trials);
  const std::vector<double> zero(2, 0.0);
  const SymPosDef eye = SymPosDef::identity(2);
  for (int t = 0; t < trials; ++t) {
    RngStream data_rng(3000, t);
    const Sample x = sample_mvnormal(30, zero, eye, data_rng);
    TestConfig cfg(FamilySpec::standard(Family::normal, 2));
    cfg.m = 5;
    cfg.M = 200;
    cfg.seed = derive_stream(0xAB, t, 0);
    pvalues[t] = run_test(x, cfg).p_value;
  }
  std::sort(pvalues.begin(), pvalues.end());
  double ks = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double u = pvalues[i];
    ks = std::max(ks, std::abs((i + 1.0) / trials - u));
    ks = std::max(ks, std::abs(u - static_cast<double>(i) / trials));
  }
  EXPECT_LE(ks, 0.12);
}

}  // namespace
}  // namespace ellgof

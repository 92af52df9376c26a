#include "ellgof/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ellgof/errors.hpp"
#include "ellgof/parallel.hpp"

namespace ellgof {

namespace {

/// Statistic values of x_std against m fresh standard-member samples.
std::vector<double> replicate_statistics(const Sample& x_std,
                                         const FamilySpec& standard_family,
                                         const WeightKernel& kernel, int m,
                                         std::uint64_t master_seed,
                                         std::uint64_t phase,
                                         std::uint64_t task) {
  const int n = x_std.n;
  const double within_x = psi_within_sum(x_std, kernel);
  std::vector<double> values(m);
  for (int r = 0; r < m; ++r) {
    RngStream rng(master_seed, derive_stream(phase, task, static_cast<std::uint64_t>(r)));
    const Sample x0 = sample_family(n, standard_family, rng);
    const double within_x0 = psi_within_sum(x0, kernel);
    const double cross = psi_cross_sum(x_std, x0, kernel);
    values[r] = t_psi_from_sums(within_x, within_x0, cross, n);
  }
  return values;
}

double aggregate(const std::vector<double>& values, Aggregation agg) {
  if (agg == Aggregation::max) {
    return *std::max_element(values.begin(), values.end());
  }
  detail::CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value() / static_cast<double>(values.size());
}

}  // namespace

std::string aggregation_name(Aggregation a) {
  return a == Aggregation::mean ? "mean" : "max";
}

void TestConfig::validate() const {
  if (m < 1) throw config_error("TestConfig: m must be >= 1");
  if (M < 1) throw config_error("TestConfig: M must be >= 1");
  // alpha = 0 is allowed as the degenerate "reject only above the maximum".
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw config_error("TestConfig: alpha must lie in [0, 1)");
  }
}

double empirical_upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("empirical quantile of no values");
  const auto m = static_cast<double>(values.size());
  auto k = static_cast<long long>(std::ceil((1.0 - alpha) * (m + 1.0)));
  k = std::clamp<long long>(k, 1, static_cast<long long>(values.size()));
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
  return values[k - 1];
}

double mc_p_value(double statistic, std::span<const double> null_stats) {
  std::size_t count = 0;
  for (double v : null_stats)
    if (v >= statistic) ++count;
  return (1.0 + static_cast<double>(count)) /
         (static_cast<double>(null_stats.size()) + 1.0);
}

double aggregate_statistic(const Sample& x, const TestConfig& cfg,
                           std::uint64_t master_seed) {
  cfg.validate();
  const FamilySpec standard_family =
      FamilySpec::standard(cfg.family.family, x.p,
                           cfg.family.family == Family::student_t ? cfg.family.nu
                                                                  : cfg.family.N);
  const ThetaHat th = moment_estimate(x, cfg.family);
  const Sample x_std = standardize(x, th);
  const auto values = replicate_statistics(x_std, standard_family, cfg.kernel,
                                           cfg.m, master_seed, stream_phase::statistic, 0);
  return aggregate(values, cfg.agg);
}

BootstrapResult bootstrap_critical(int n, const TestConfig& cfg,
                                   std::uint64_t master_seed, unsigned workers) {
  cfg.validate();
  const int p = cfg.family.dim();
  if (n < p + 1) throw config_error("bootstrap_critical requires n >= p + 1");
  const FamilySpec standard_family =
      FamilySpec::standard(cfg.family.family, p,
                           cfg.family.family == Family::student_t ? cfg.family.nu
                                                                  : cfg.family.N);

  BootstrapResult result;
  result.null_stats.assign(cfg.M, 0.0);
  std::vector<int> redraw_flags(cfg.M, 0);

  parallel_for(static_cast<std::size_t>(cfg.M), workers, [&](std::size_t j) {
    const auto task = static_cast<std::uint64_t>(j);
    // Pseudo-data is replicate index m; the null replicates are 0..m-1.
    RngStream pseudo_rng(master_seed,
                         derive_stream(stream_phase::bootstrap, task,
                                       static_cast<std::uint64_t>(cfg.m)));
    Sample pseudo = sample_family(n, standard_family, pseudo_rng);
    ThetaHat th = [&]() {
      try {
        return moment_estimate(pseudo, cfg.family);
      } catch (const numeric_error&) {
        redraw_flags[j] = 1;
        RngStream redraw_rng(master_seed,
                             derive_stream(stream_phase::redraw, task,
                                           static_cast<std::uint64_t>(cfg.m)));
        pseudo = sample_family(n, standard_family, redraw_rng);
        return moment_estimate(pseudo, cfg.family);
      }
    }();
    const Sample pseudo_std = standardize(pseudo, th);
    const auto values =
        replicate_statistics(pseudo_std, standard_family, cfg.kernel, cfg.m,
                             master_seed, stream_phase::bootstrap, task);
    result.null_stats[j] = aggregate(values, cfg.agg);
  });

  result.redraws = std::accumulate(redraw_flags.begin(), redraw_flags.end(), 0);
  result.critical_point = empirical_upper_quantile(result.null_stats, cfg.alpha);
  return result;
}

TestOutcome run_test(const Sample& x, const TestConfig& cfg, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  const double statistic = aggregate_statistic(x, cfg, cfg.seed);
  const BootstrapResult boot = bootstrap_critical(x.n, cfg, cfg.seed, workers);

  TestOutcome out;
  out.statistic = statistic;
  out.critical_point = boot.critical_point;
  out.p_value = mc_p_value(statistic, boot.null_stats);
  out.reject = statistic > boot.critical_point;
  out.m = cfg.m;
  out.M = cfg.M;
  out.alpha = cfg.alpha;
  out.seed = cfg.seed;
  out.agg = cfg.agg;
  out.family = family_name(cfg.family.family);
  out.kernel = cfg.kernel.name();
  out.n = x.n;
  out.p = x.p;
  out.redraws = boot.redraws;
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

TestOutcome run_bhep_test(const Sample& x, const BhepConfig& cfg, unsigned workers) {
  if (cfg.M < 1) throw config_error("BhepConfig: M must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const double statistic = bhep_composite(x, cfg.beta).value;

  const FamilySpec normal = FamilySpec::standard(Family::normal, x.p);
  std::vector<double> null_stats(cfg.M, 0.0);
  parallel_for(static_cast<std::size_t>(cfg.M), workers, [&](std::size_t j) {
    RngStream rng(cfg.seed, derive_stream(stream_phase::bhep, static_cast<std::uint64_t>(j), 0));
    const Sample x0 = sample_family(x.n, normal, rng);
    null_stats[j] = bhep_composite(x0, cfg.beta).value;
  });

  TestOutcome out;
  out.statistic = statistic;
  out.critical_point = empirical_upper_quantile(null_stats, cfg.alpha);
  out.p_value = mc_p_value(statistic, null_stats);
  out.reject = statistic > out.critical_point;
  out.m = 1;
  out.M = cfg.M;
  out.alpha = cfg.alpha;
  out.seed = cfg.seed;
  out.agg = Aggregation::mean;
  out.family = "normal";
  out.kernel = "bhep:" + std::to_string(cfg.beta);
  out.n = x.n;
  out.p = x.p;
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace ellgof

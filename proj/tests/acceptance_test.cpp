// Acceptance suite: end-to-end checks of the statistic, the calibration
// machinery and the simulation harness at desk scale. Each test prints one
// pass/fail line; the Monte Carlo checks use fixed seeds throughout.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ellgof/cli.hpp"
#include "ellgof/csv.hpp"
#include "ellgof/engine.hpp"
#include "ellgof/experiment.hpp"
#include "ellgof/parallel.hpp"
#include "ellgof/statistics.hpp"
#include "ellgof/toml_lite.hpp"
#include "test_util.hpp"

namespace ellgof {
namespace {

using testing::apply_matrix;
using testing::random_full_rank;
using testing::random_sample;
using testing::shift_sample;

constexpr double kInf = std::numeric_limits<double>::infinity();

class Timer {
 public:
  explicit Timer(const char* label) : label_(label), start_(clock::now()) {}
  ~Timer() {
    const double s = std::chrono::duration<double>(clock::now() - start_).count();
    std::printf("[   time   ] %s: %.1f s\n", label_, s);
  }

 private:
  using clock = std::chrono::steady_clock;
  const char* label_;
  clock::time_point start_;
};

std::string exam_fixture() {
  return std::string(ELLGOF_TEST_DATA_DIR) + "/exam_marks.csv";
}

ExperimentSpec spec_from_toml(const std::string& text) {
  return parse_experiment(parse_toml(text));
}

double rate_of(const PowerTable& t, int n, double grid_value,
               const std::string& test_name) {
  for (const auto& r : t.rows) {
    const bool grid_match = std::isinf(grid_value) ? std::isinf(r.grid_value)
                                                   : r.grid_value == grid_value;
    if (r.n == n && grid_match && r.test_name == test_name) return r.rejection_rate;
  }
  throw std::runtime_error("power table row not found: " + test_name);
}

// Criterion 1: the Monte Carlo integration oracle agrees with the pairwise
// statistic, |n/(n-1) (T2 - 2) - T| <= 3 MC standard errors, for 20 random
// data/null pairs and all three kernel families at 1e6 draws.
TEST(Acceptance, Criterion1OracleEquivalence) {
  Timer timer("criterion 1");
  const auto t0 = std::chrono::steady_clock::now();

  const WeightKernel kernels[] = {WeightKernel::gaussian(), WeightKernel::stable(1.5),
                                  WeightKernel::gen_laplace(1.0)};
  const int n = 20;
  const int n_pairs = 20;
  const int n_mc = 1000000;

  struct Task {
    int pair;
    int kernel;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < n_pairs; ++i)
    for (int k = 0; k < 3; ++k) tasks.push_back({i, k});

  std::vector<double> deviation(tasks.size());  // |diff| / SE
  parallel_for(tasks.size(), default_workers(), [&](std::size_t ti) {
    const auto [pair, ki] = tasks[ti];
    const int p = pair % 2 == 0 ? 2 : 3;
    RngStream data_rng(811, static_cast<std::uint64_t>(pair));
    const Sample raw = random_sample(n, p, data_rng, 1.0 + 0.3 * (pair % 3));
    const auto th =
        moment_estimate(raw, FamilySpec::standard(Family::normal, p));
    const Sample x_std = standardize(raw, th);
    const Sample x0 = random_sample(n, p, data_rng);

    RngStream mc_rng(812, derive_stream(0, pair, static_cast<std::uint64_t>(ki)));
    const auto est = t2_integral_oracle(x_std, x0, kernels[ki], n_mc, mc_rng);
    const double target = t_psi_simple(x_std, x0, kernels[ki]).value;
    deviation[ti] =
        std::abs(est.transformed(n) - target) / est.transformed_std_error(n);
  });

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    EXPECT_LE(deviation[ti], 3.0)
        << "pair " << tasks[ti].pair << " kernel " << kernels[tasks[ti].kernel].name();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(elapsed, 120.0);
}

// Criterion 2: exact invariances. Translation invariance of the composite
// statistic to 1e-12; the rotation identity to 1e-9 over 50 random full-rank
// maps; estimator equivariance/invariance to 1e-10.
TEST(Acceptance, Criterion2ExactInvariances) {
  Timer timer("criterion 2");
  const auto k = WeightKernel::gaussian();

  {  // translation invariance
    RngStream rng(820, 0);
    const auto family = FamilySpec::standard(Family::normal, 2);
    for (int trial = 0; trial < 10; ++trial) {
      const Sample x = random_sample(50, 2, rng);
      const Sample x0 = random_sample(50, 2, rng);
      const std::vector<double> b = {5.0 * rng.next_normal(), 5.0 * rng.next_normal()};
      const Sample xb = shift_sample(x, b);
      const double t1 = t_psi_composite(x, x0, moment_estimate(x, family), k).value;
      const double t2 = t_psi_composite(xb, x0, moment_estimate(xb, family), k).value;
      ASSERT_NEAR(t1, t2, 1e-12);
    }
  }

  {  // rotation identity with U = V^(1/2) A' (A V A')^(-1/2)
    RngStream rng(821, 0);
    const auto family = FamilySpec::standard(Family::normal, 3);
    const Sample x = random_sample(40, 3, rng);
    const Sample x0 = random_sample(40, 3, rng);
    const auto th = moment_estimate(x, family);
    for (int trial = 0; trial < 50; ++trial) {
      const Mat a = random_full_rank(3, rng);
      const Sample ax = apply_matrix(x, a);
      const Mat ava = a * th.v_hat.mat() * a.transposed();
      const Mat u =
          spd_sqrt(th.v_hat).mat() * a.transposed() * inv_sqrt(SymPosDef(ava)).mat();
      const double lhs =
          t_psi_composite(ax, x0, moment_estimate(ax, family), k).value;
      const double rhs = t_psi_composite(x, apply_matrix(x0, u), th, k).value;
      ASSERT_NEAR(lhs, rhs, 1e-9);
    }
  }

  {  // estimator equivariance and invariance
    RngStream rng(822, 0);
    const auto family = FamilySpec::standard(Family::normal, 3);
    for (int trial = 0; trial < 25; ++trial) {
      const Sample x = random_sample(40, 3, rng);
      const Mat a = random_full_rank(3, rng);
      const std::vector<double> b = {rng.next_normal(), rng.next_normal(),
                                     rng.next_normal()};
      const Sample tx = shift_sample(apply_matrix(x, a), b);
      const auto th = moment_estimate(x, family);
      const auto th_t = moment_estimate(tx, family);
      const auto expected_delta = mat_vec(a, th.delta_hat);
      for (int j = 0; j < 3; ++j)
        ASSERT_NEAR(th_t.delta_hat[j], expected_delta[j] + b[j], 1e-10);
      const Mat expected_v = a * th.v_hat.mat() * a.transposed();
      ASSERT_LE(testing::max_abs_diff(th_t.v_hat.mat(), expected_v),
                1e-10 * expected_v.frobenius_norm());
    }
  }
}

// Criterion 3: coincidence floor, T(x, x) = -2n/(n-1) to 1e-12.
TEST(Acceptance, Criterion3CoincidenceFloor) {
  Timer timer("criterion 3");
  RngStream rng(830, 0);
  for (int n : {2, 5, 50}) {
    for (int rep = 0; rep < 5; ++rep) {
      const int p = 1 + rep % 3;
      const Sample x = random_sample(n, p, rng, 0.5 + rng.next_double());
      const double t = t_psi_simple(x, x, WeightKernel::gaussian()).value;
      ASSERT_NEAR(t, -2.0 * n / (n - 1.0), 1e-12) << "n " << n << " p " << p;
    }
  }
}

// Criterion 4: size control for all four null families, mean and max tests,
// p = 2, n = 50, m = 10, M = 500, 200 trials; rejection rate in [0.02, 0.09].
TEST(Acceptance, Criterion4SizeControl) {
  Timer timer("criterion 4");
  struct NullCase {
    const char* label;
    const char* family;
    const char* hyper_key;
    double hyper;
    const char* location;
    const char* scatter;
  };
  // The normal null runs at shifted/correlated parameters (the hardest case
  // for invariance in law); the others at their standard members.
  const NullCase cases[] = {
      {"normal", "normal", nullptr, 0.0, "e_p", "halfcorr"},
      {"laplace", "laplace", nullptr, 0.0, "zeros", "identity"},
      {"studentt", "studentt", "nu", 12.0, "zeros", "identity"},
      {"kotz", "kotz", "N", 2.0, "zeros", "identity"},
  };

  for (const auto& c : cases) {
    std::ostringstream toml;
    toml << "name = \"size-" << c.label << "\"\nseed = 840\ntrials = 200\n"
         << "dims = [2]\nsizes = [50]\n[null]\nfamily = \"" << c.family << "\"\n";
    if (c.hyper_key) toml << c.hyper_key << " = " << c.hyper << "\n";
    toml << "[data]\ngenerator = \"" << c.family << "\"\n";
    if (c.hyper_key) toml << "grid = [" << c.hyper << "]\n";
    toml << "location = \"" << c.location << "\"\nscatter = \"" << c.scatter << "\"\n";
    toml << "[[tests]]\nname = \"mean\"\nkernel = \"gauss\"\nagg = \"mean\"\n"
            "m = 10\nM = 500\nalpha = 0.05\n"
            "[[tests]]\nname = \"max\"\nkernel = \"gauss\"\nagg = \"max\"\n"
            "m = 10\nM = 500\nalpha = 0.05\n";
    const PowerTable table = run_experiment(spec_from_toml(toml.str()),
                                            default_workers());
    for (const auto& row : table.rows) {
      EXPECT_GE(row.rejection_rate, 0.02) << c.label << " " << row.test_name;
      EXPECT_LE(row.rejection_rate, 0.09) << c.label << " " << row.test_name;
      std::printf("[   size   ] %-8s %-4s rate %.3f\n", c.label,
                  row.test_name.c_str(), row.rejection_rate);
    }
  }
}

// Criterion 5: power orderings at desk scale, mean test, p = 2, n = 100,
// 200 trials.
TEST(Acceptance, Criterion5PowerOrderings) {
  Timer timer("criterion 5");
  const unsigned workers = default_workers();

  {  // heavier tails vs the normal null: power(nu=3) - power(nu=inf) >= 0.2
    const auto spec = spec_from_toml(R"(
name = "power-ex1"
seed = 851
trials = 200
dims = [2]
sizes = [100]
[null]
family = "normal"
[data]
generator = "studentt"
grid_param = "nu"
grid = [3.0, inf]
[[tests]]
name = "mean"
kernel = "gauss"
agg = "mean"
m = 10
M = 500
)");
    const PowerTable t = run_experiment(spec, workers);
    const double power_heavy = rate_of(t, 100, 3.0, "mean");
    const double power_null = rate_of(t, 100, kInf, "mean");
    std::printf("[  power   ] studentt nu=3: %.3f, nu=inf: %.3f\n", power_heavy,
                power_null);
    EXPECT_GE(power_heavy - power_null, 0.2);
  }

  {  // skewness vs the student-t null: power(theta=6) - power(theta=0) >= 0.2
    const auto spec = spec_from_toml(R"(
name = "power-ex3"
seed = 853
trials = 200
dims = [2]
sizes = [100]
[null]
family = "studentt"
nu = 12.0
[data]
generator = "skewt"
grid_param = "theta"
grid = [0.0, 6.0]
nu = 12.0
[[tests]]
name = "mean"
kernel = "gauss"
agg = "mean"
m = 10
M = 500
)");
    const PowerTable t = run_experiment(spec, workers);
    const double power_skew = rate_of(t, 100, 6.0, "mean");
    const double power_null = rate_of(t, 100, 0.0, "mean");
    std::printf("[  power   ] skewt theta=6: %.3f, theta=0: %.3f\n", power_skew,
                power_null);
    EXPECT_GE(power_skew - power_null, 0.2);
  }

  {  // tail-weight departure within the Kotz family: power(N=5) > alpha + 0.05
    const auto spec = spec_from_toml(R"(
name = "power-ex4"
seed = 854
trials = 200
dims = [2]
sizes = [100]
[null]
family = "kotz"
N = 2.0
[data]
generator = "kotz"
grid_param = "N"
grid = [5.0]
[[tests]]
name = "mean"
kernel = "gauss"
agg = "mean"
m = 10
M = 500
)");
    const PowerTable t = run_experiment(spec, workers);
    const double power = rate_of(t, 100, 5.0, "mean");
    std::printf("[  power   ] kotz N=5: %.3f\n", power);
    EXPECT_GT(power, 0.10);
  }
}

// Criterion 6: the 5-dimensional exam-marks data reject normality with
// p < 0.01 for both the mean test (m = 10, M = 2000) and BHEP(beta = 1).
TEST(Acceptance, Criterion6RealData) {
  Timer timer("criterion 6");
  const Sample x = load_csv(exam_fixture());
  ASSERT_EQ(x.n, 88);
  ASSERT_EQ(x.p, 5);

  TestConfig cfg(FamilySpec::standard(Family::normal, 5));
  cfg.m = 10;
  cfg.M = 2000;
  cfg.seed = 860;
  const TestOutcome mean_out = run_test(x, cfg, default_workers());
  std::printf("[ realdata ] mean test: statistic %.4f, critical %.4f, p %.5f\n",
              mean_out.statistic, mean_out.critical_point, mean_out.p_value);
  EXPECT_LT(mean_out.p_value, 0.01);
  EXPECT_TRUE(mean_out.reject);

  BhepConfig bhep;
  bhep.M = 2000;
  bhep.seed = 861;
  const TestOutcome bhep_out = run_bhep_test(x, bhep, default_workers());
  std::printf("[ realdata ] bhep: statistic %.4f, critical %.4f, p %.5f\n",
              bhep_out.statistic, bhep_out.critical_point, bhep_out.p_value);
  EXPECT_LT(bhep_out.p_value, 0.01);
}

// Criterion 7: sampler moments. Sample covariance of each family at (0, I)
// within 3 standard errors of c I entrywise, and the Kotz N = 1 draw is
// indistinguishable from the normal by the two-sample CF distance, with the
// threshold calibrated from normal-vs-normal null runs.
TEST(Acceptance, Criterion7SamplerMoments) {
  Timer timer("criterion 7");
  const int n = 100000;
  const int p = 2;

  struct Case {
    const char* label;
    Family family;
    double hyper;
    double c;
  };
  const Case cases[] = {
      {"normal", Family::normal, 0.0, 1.0},
      {"laplace", Family::laplace, 0.0, 1.0},
      {"studentt", Family::student_t, 12.0, 12.0 / 10.0},
      {"kotz", Family::kotz, 2.0, (2.0 * 2.0 + p - 2.0) / p},
  };
  int stream = 0;
  for (const auto& c : cases) {
    RngStream rng(870, stream++);
    const Sample x = sample_family(n, FamilySpec::standard(c.family, p, c.hyper), rng);
    const auto mean = sample_mean(x);
    // entrywise data-driven standard errors of the covariance entries
    for (int a = 0; a < p; ++a) {
      for (int b = a; b < p; ++b) {
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double prod = (x.at(i, a) - mean[a]) * (x.at(i, b) - mean[b]);
          s += prod;
          s2 += prod * prod;
        }
        const double cov_ab = s / n;
        const double se = std::sqrt((s2 / n - cov_ab * cov_ab) / n);
        const double target = a == b ? c.c : 0.0;
        EXPECT_NEAR(cov_ab, target, 3.0 * se)
            << c.label << " entry (" << a << "," << b << ")";
      }
    }
  }

  {  // Kotz N = 1 vs normal, CF-distance threshold from null runs
    const int m = 1000;
    const int pp = 3;
    const std::vector<double> z3(pp, 0.0);
    const SymPosDef eye3 = SymPosDef::identity(pp);
    const auto k = WeightKernel::gaussian();
    std::vector<double> null_dist;
    for (int r = 0; r < 40; ++r) {
      RngStream ra(871, 2 * r), rb(871, 2 * r + 1);
      null_dist.push_back(t_psi_simple(sample_mvnormal(m, z3, eye3, ra),
                                       sample_mvnormal(m, z3, eye3, rb), k)
                              .value);
    }
    double mu = 0.0;
    for (double v : null_dist) mu += v;
    mu /= null_dist.size();
    double var = 0.0;
    for (double v : null_dist) var += (v - mu) * (v - mu);
    var /= null_dist.size();
    const double threshold = mu + 4.0 * std::sqrt(var);

    double kotz_mean = 0.0;
    for (int r = 0; r < 5; ++r) {
      RngStream ra(872, 2 * r), rb(872, 2 * r + 1);
      const double d = t_psi_simple(sample_kotz(m, z3, eye3, 1.0, ra),
                                    sample_mvnormal(m, z3, eye3, rb), k)
                           .value;
      EXPECT_LE(d, mu + 6.0 * std::sqrt(var)) << "kotz run " << r;
      kotz_mean += d;
    }
    kotz_mean /= 5.0;
    std::printf("[  sampler ] kotz(1) CF distance %.4f vs threshold %.4f\n",
                kotz_mean, threshold);
    EXPECT_LE(kotz_mean, threshold);
  }
}

// Criterion 8: BHEP comparison on heavy-tail alternatives (soft trend
// check): BHEP is at least as powerful up to 3 SE at n = 20 and n = 100,
// and its advantage does not grow with n beyond 3 SE.
TEST(Acceptance, Criterion8BhepRelationship) {
  Timer timer("criterion 8");
  const auto spec = spec_from_toml(R"(
name = "bhep-gap"
seed = 880
trials = 500
dims = [2]
sizes = [20, 100]
[null]
family = "normal"
[data]
generator = "studentt"
grid_param = "nu"
grid = [5.0]
[[tests]]
name = "mean"
kernel = "gauss"
agg = "mean"
m = 10
M = 500
[[tests]]
name = "bhep"
statistic = "bhep"
beta = 1.0
M = 500
)");
  const PowerTable t = run_experiment(spec, default_workers());
  const double mean20 = rate_of(t, 20, 5.0, "mean");
  const double bhep20 = rate_of(t, 20, 5.0, "bhep");
  const double mean100 = rate_of(t, 100, 5.0, "mean");
  const double bhep100 = rate_of(t, 100, 5.0, "bhep");
  std::printf("[   bhep   ] n=20: bhep %.3f vs mean %.3f; n=100: bhep %.3f vs mean %.3f\n",
              bhep20, mean20, bhep100, mean100);

  const double se_power = std::sqrt(0.25 / 500.0);
  const double se_gap = std::sqrt(2.0) * se_power;
  EXPECT_GE(bhep20, mean20 - 3.0 * se_gap);
  EXPECT_GE(bhep100, mean100 - 3.0 * se_gap);
  const double gap20 = bhep20 - mean20;
  const double gap100 = bhep100 - mean100;
  EXPECT_LE(gap100, gap20 + 3.0 * std::sqrt(2.0) * se_gap);
}

// Criterion 9: `simulate` emits byte-identical CSV across repeated runs and
// across worker counts 1 and 8.
TEST(Acceptance, Criterion9SimulateDeterminism) {
  Timer timer("criterion 9");
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ellgof_acceptance_c9";
  fs::create_directories(dir);
  const std::string spec_path = (dir / "spec.toml").string();
  {
    std::ofstream f(spec_path);
    f << R"(
name = "determinism"
seed = 890
trials = 4
dims = [2]
sizes = [20]
[null]
family = "normal"
[data]
generator = "studentt"
grid_param = "nu"
grid = [5.0, inf]
[[tests]]
name = "mean"
kernel = "gauss"
agg = "mean"
m = 3
M = 60
[[tests]]
name = "bhep"
statistic = "bhep"
beta = 1.0
M = 60
)";
  }

  auto run_simulate = [&](const std::string& out, const char* workers) {
    const char* argv[] = {"ellgof",    "simulate",  "--spec", spec_path.c_str(),
                          "--out",     out.c_str(), "--workers", workers,
                          "--quiet"};
    return cli_main(9, argv);
  };
  auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };

  const std::string o1 = (dir / "w1.csv").string();
  const std::string o2 = (dir / "w1_again.csv").string();
  const std::string o3 = (dir / "w8.csv").string();
  ASSERT_EQ(run_simulate(o1, "1"), 0);
  ASSERT_EQ(run_simulate(o2, "1"), 0);
  ASSERT_EQ(run_simulate(o3, "8"), 0);
  const std::string c1 = slurp(o1);
  EXPECT_FALSE(c1.empty());
  EXPECT_EQ(c1, slurp(o2));
  EXPECT_EQ(c1, slurp(o3));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace ellgof

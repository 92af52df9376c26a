#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellgof/engine.hpp"
#include "ellgof/samplers.hpp"

namespace ellgof {

/// Data-generating process for a power experiment: a family or one of the
/// alternative generators, with one grid-swept parameter.
struct GeneratorSpec {
  enum class Kind {
    normal,
    laplace,
    studentt,
    kotz,
    nm,       // balanced normal mixture, grid over theta
    uniform,  // i.i.d. uniform coordinates
    marexp,   // gaussian with exponential last coordinate
    lnmix,    // (1-theta) Laplace + theta normal
    skewt,    // slant-skewed t, grid over theta, fixed nu
  };
  enum class Location { zeros, e_p };
  enum class Scatter { identity, halfcorr };

  Kind kind = Kind::normal;
  std::string grid_param;  // "nu", "theta" or "N"; empty for fixed generators
  double fixed_nu = 12.0;  // skew-t degrees of freedom
  Location location = Location::zeros;
  Scatter scatter = Scatter::identity;

  Sample generate(int n, int p, double grid_value, RngStream& rng) const;
};

/// One test column in the power table.
struct TestSpecEntry {
  std::string name;
  bool bhep = false;
  WeightKernel kernel = WeightKernel::gaussian();
  Aggregation agg = Aggregation::mean;
  int m = 10;
  int M = 1000;
  double alpha = 0.05;
  double beta = 1.0;  // bhep weight scale
};

struct ExperimentSpec {
  std::string name;
  std::uint64_t seed = 0;
  int trials = 200;
  std::vector<int> dims;
  std::vector<int> sizes;
  Family null_family = Family::normal;
  double null_hyper = 0.0;
  GeneratorSpec generator;
  std::vector<double> grid;  // at least one value; fixed generators use {0}
  std::vector<TestSpecEntry> tests;

  void validate() const;
};

/// Reads an experiment spec from a parsed TOML tree (see the shipped files
/// under specs/ for the schema). Unknown fields or tags raise config_error.
ExperimentSpec parse_experiment(const nlohmann::json& doc);

ExperimentSpec load_experiment(const std::string& path);

struct PowerRow {
  int p = 0;
  int n = 0;
  double grid_value = 0.0;
  std::string test_name;
  double rejection_rate = 0.0;
  int trials = 0;  // completed trials behind the rate
  double mc_stderr = 0.0;
};

struct PowerTable {
  std::vector<PowerRow> rows;
  int failed_trials = 0;
};

/// Runs the experiment grid. Trials are the parallel unit; every data set
/// and every test seed derives from spec.seed alone, so the table is
/// identical for any worker count. Per-trial estimation failures are
/// counted and tolerated up to 1% of all trials, after which the
/// experiment aborts with numeric_error. `progress`, when true, writes a
/// coarse progress meter to stderr (output rows are unaffected).
PowerTable run_experiment(const ExperimentSpec& spec, unsigned workers = 1,
                          bool progress = false);

/// Plot-ready CSV: p,n,grid_value,test_name,rejection_rate,trials,mc_stderr.
void write_power_csv(const PowerTable& table, std::ostream& os);

void save_power_csv(const PowerTable& table, const std::string& path);

}  // namespace ellgof

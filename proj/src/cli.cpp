#include "ellgof/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellgof/csv.hpp"
#include "ellgof/engine.hpp"
#include "ellgof/errors.hpp"
#include "ellgof/experiment.hpp"
#include "ellgof/parallel.hpp"

namespace ellgof {

namespace {

std::vector<std::string> split_tag(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ':') {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

double parse_param(const std::string& tag, const std::string& text) {
  try {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw config_error("cannot parse parameter '" + text + "' in '" + tag + "'");
  }
}

/// "normal" | "laplace" | "studentt:NU" | "kotz:N"
FamilySpec parse_family_tag(const std::string& tag, int p) {
  const auto parts = split_tag(tag);
  if (parts[0] == "normal" && parts.size() == 1)
    return FamilySpec::standard(Family::normal, p);
  if (parts[0] == "laplace" && parts.size() == 1)
    return FamilySpec::standard(Family::laplace, p);
  if (parts[0] == "studentt" && parts.size() == 2)
    return FamilySpec::standard(Family::student_t, p, parse_param(tag, parts[1]));
  if (parts[0] == "kotz" && parts.size() == 2)
    return FamilySpec::standard(Family::kotz, p, parse_param(tag, parts[1]));
  throw config_error("unknown family '" + tag +
                     "' (expected normal|laplace|studentt:NU|kotz:N)");
}

/// "gauss" | "stable:B" | "glaplace:B"
WeightKernel parse_kernel_tag(const std::string& tag) {
  const auto parts = split_tag(tag);
  if (parts[0] == "gauss" && parts.size() == 1) return WeightKernel::gaussian();
  if (parts[0] == "stable" && parts.size() == 2)
    return WeightKernel::stable(parse_param(tag, parts[1]));
  if (parts[0] == "glaplace" && parts.size() == 2)
    return WeightKernel::gen_laplace(parse_param(tag, parts[1]));
  throw config_error("unknown kernel '" + tag +
                     "' (expected gauss|stable:B|glaplace:B)");
}

/// Family tags plus the alternative generators, for `sample`.
Sample generate_by_tag(const std::string& tag, int n, int p, RngStream& rng) {
  const auto parts = split_tag(tag);
  const std::string& head = parts[0];
  if (head == "normal" || head == "laplace" || head == "studentt" || head == "kotz") {
    if (head == "studentt" && parts.size() == 2) {
      // Generation tolerates any nu > 0 (and inf), unlike the null family.
      const std::vector<double> delta(p, 0.0);
      return sample_mvt(n, delta, SymPosDef::identity(p), parse_param(tag, parts[1]), rng);
    }
    return sample_family(n, parse_family_tag(tag, p), rng);
  }
  if (head == "nm" && parts.size() == 2)
    return sample_alternative(n, p, AltSpec::normal_mixture(parse_param(tag, parts[1])), rng);
  if (head == "uniform" && parts.size() == 1)
    return sample_alternative(n, p, AltSpec::uniform_cube(), rng);
  if (head == "marexp" && parts.size() == 1)
    return sample_alternative(n, p, AltSpec::mar_exp(), rng);
  if (head == "lnmix" && parts.size() == 2)
    return sample_alternative(n, p, AltSpec::laplace_normal_mixture(parse_param(tag, parts[1])),
                              rng);
  if (head == "skewt" && parts.size() == 3)
    return sample_alternative(
        n, p, AltSpec::skew_t(parse_param(tag, parts[1]), parse_param(tag, parts[2])), rng);
  throw config_error("unknown generator '" + tag + "'");
}

nlohmann::json outcome_to_json(const TestOutcome& out) {
  nlohmann::json j;
  j["statistic"] = out.statistic;
  j["critical_point"] = out.critical_point;
  j["p_value"] = out.p_value;
  j["reject"] = out.reject;
  j["m"] = out.m;
  j["M"] = out.M;
  j["alpha"] = out.alpha;
  j["seed"] = out.seed;
  j["family"] = out.family;
  j["kernel"] = out.kernel;
  j["agg"] = aggregation_name(out.agg);
  j["n"] = out.n;
  j["p"] = out.p;
  j["wall_time_s"] = out.wall_time_s;
  return j;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Monte Carlo goodness-of-fit tests for elliptical families"};
  app.require_subcommand(1);

  // --- test ---
  auto* test_cmd = app.add_subcommand("test", "Run the test on a CSV data set");
  std::string test_data, test_family, test_kernel = "gauss", test_agg = "mean";
  std::string test_out;
  int test_m = 10, test_M = 1000;
  double test_alpha = 0.05;
  std::uint64_t test_seed = 0;
  unsigned test_workers = default_workers();
  test_cmd->add_option("--data", test_data, "CSV file, one observation per row")->required();
  test_cmd->add_option("--family", test_family,
                       "null family: normal|laplace|studentt:NU|kotz:N")->required();
  test_cmd->add_option("--kernel", test_kernel, "weight kernel: gauss|stable:B|glaplace:B");
  test_cmd->add_option("--m", test_m, "Monte Carlo replicates per statistic");
  test_cmd->add_option("-M,--big-m", test_M, "resampling repetitions for the critical point");
  test_cmd->add_option("--alpha", test_alpha, "test level");
  test_cmd->add_option("--agg", test_agg, "replicate aggregation: mean|max");
  test_cmd->add_option("--seed", test_seed, "master seed");
  test_cmd->add_option("--out", test_out, "write the outcome JSON here (default stdout)");
  test_cmd->add_option("--workers", test_workers, "worker threads");

  // --- simulate ---
  auto* sim_cmd = app.add_subcommand("simulate", "Run a power/size experiment spec");
  std::string sim_spec, sim_out;
  int sim_trials = 0;
  unsigned sim_workers = default_workers();
  bool sim_quiet = false;
  sim_cmd->add_option("--spec", sim_spec, "experiment spec (TOML)")->required();
  sim_cmd->add_option("--out", sim_out, "output CSV path")->required();
  sim_cmd->add_option("--trials", sim_trials, "override the spec's trial count");
  sim_cmd->add_option("--workers", sim_workers, "worker threads");
  sim_cmd->add_flag("--quiet", sim_quiet, "suppress the progress meter");

  // --- sample ---
  auto* sample_cmd = app.add_subcommand("sample", "Draw from a generator, write CSV");
  std::string sample_family_tag, sample_out;
  int sample_n = 0, sample_p = 0;
  std::uint64_t sample_seed = 0;
  sample_cmd->add_option("--family", sample_family_tag,
                         "normal|laplace|studentt:NU|kotz:N|nm:T|uniform|marexp|"
                         "lnmix:T|skewt:T:NU")->required();
  sample_cmd->add_option("--n", sample_n, "number of observations")->required();
  sample_cmd->add_option("--p", sample_p, "dimension")->required();
  sample_cmd->add_option("--seed", sample_seed, "master seed");
  sample_cmd->add_option("--out", sample_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << e.what() << "\n";
    return 1;
  }

  if (test_cmd->parsed()) {
    const Sample x = load_csv(test_data);
    TestConfig cfg(parse_family_tag(test_family, x.p));
    cfg.kernel = parse_kernel_tag(test_kernel);
    cfg.m = test_m;
    cfg.M = test_M;
    cfg.alpha = test_alpha;
    cfg.seed = test_seed;
    if (test_agg == "mean") {
      cfg.agg = Aggregation::mean;
    } else if (test_agg == "max") {
      cfg.agg = Aggregation::max;
    } else {
      throw config_error("unknown aggregation '" + test_agg + "' (expected mean|max)");
    }
    const TestOutcome out = run_test(x, cfg, test_workers);
    const std::string text = outcome_to_json(out).dump(2) + "\n";
    if (test_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(test_out, std::ios::binary);
      if (!f) throw data_error("cannot open output file: " + test_out);
      f << text;
      std::cerr << (out.reject ? "reject" : "accept") << " (p = " << out.p_value
                << "), outcome written to " << test_out << "\n";
    }
    return 0;
  }

  if (sim_cmd->parsed()) {
    ExperimentSpec spec = load_experiment(sim_spec);
    if (sim_trials > 0) spec.trials = sim_trials;
    const PowerTable table = run_experiment(spec, sim_workers, !sim_quiet);
    save_power_csv(table, sim_out);
    if (table.failed_trials > 0) {
      std::cerr << "warning: " << table.failed_trials << " trials failed estimation\n";
    }
    return 0;
  }

  if (sample_cmd->parsed()) {
    if (sample_n < 1 || sample_p < 1)
      throw config_error("sample: --n and --p must be positive");
    RngStream rng(sample_seed, derive_stream(0xD5, 0, 0));
    const Sample x = generate_by_tag(sample_family_tag, sample_n, sample_p, rng);
    if (sample_out.empty()) {
      write_csv(x, std::cout);
    } else {
      save_csv(x, sample_out);
    }
    return 0;
  }

  return 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  try {
    return run_cli(argc, argv);
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ellgof

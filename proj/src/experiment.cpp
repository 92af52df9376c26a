#include "ellgof/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "ellgof/errors.hpp"
#include "ellgof/parallel.hpp"
#include "ellgof/toml_lite.hpp"

namespace ellgof {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPhaseHarnessData = 0xDA7A;

std::vector<double> make_location(GeneratorSpec::Location loc, int p) {
  std::vector<double> d(p, 0.0);
  if (loc == GeneratorSpec::Location::e_p) {
    for (int i = 0; i < p; ++i) d[i] = i + 1.0;
  }
  return d;
}

SymPosDef make_scatter(GeneratorSpec::Scatter sc, int p) {
  if (sc == GeneratorSpec::Scatter::identity) return SymPosDef::identity(p);
  Mat m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = (i == j) ? 1.0 : 0.5;
  return SymPosDef(std::move(m));
}

}  // namespace

Sample GeneratorSpec::generate(int n, int p, double grid_value, RngStream& rng) const {
  const auto delta = make_location(location, p);
  switch (kind) {
    case Kind::normal:
      return sample_mvnormal(n, delta, make_scatter(scatter, p), rng);
    case Kind::laplace:
      return sample_mvlaplace(n, delta, make_scatter(scatter, p), rng);
    case Kind::studentt:
      return sample_mvt(n, delta, make_scatter(scatter, p), grid_value, rng);
    case Kind::kotz:
      return sample_kotz(n, delta, make_scatter(scatter, p), grid_value, rng);
    case Kind::nm:
      return sample_alternative(n, p, AltSpec::normal_mixture(grid_value), rng);
    case Kind::uniform:
      return sample_alternative(n, p, AltSpec::uniform_cube(), rng);
    case Kind::marexp:
      return sample_alternative(n, p, AltSpec::mar_exp(), rng);
    case Kind::lnmix:
      return sample_alternative(n, p, AltSpec::laplace_normal_mixture(grid_value), rng);
    case Kind::skewt:
      return sample_alternative(n, p, AltSpec::skew_t(grid_value, fixed_nu), rng);
  }
  throw config_error("unknown generator kind");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw config_error("experiment: trials must be >= 1");
  if (dims.empty()) throw config_error("experiment: dims must be nonempty");
  if (sizes.empty()) throw config_error("experiment: sizes must be nonempty");
  if (grid.empty()) throw config_error("experiment: grid must be nonempty");
  if (tests.empty()) throw config_error("experiment: at least one test entry required");
  for (int p : dims)
    if (p < 1) throw config_error("experiment: dims must be positive");
  for (int n : sizes)
    if (n < 2) throw config_error("experiment: sizes must be >= 2");
}

namespace {

Family parse_family_name(const std::string& s) {
  if (s == "normal") return Family::normal;
  if (s == "laplace") return Family::laplace;
  if (s == "studentt") return Family::student_t;
  if (s == "kotz") return Family::kotz;
  throw config_error("unknown family '" + s + "'");
}

GeneratorSpec::Kind parse_generator_name(const std::string& s) {
  using K = GeneratorSpec::Kind;
  if (s == "normal") return K::normal;
  if (s == "laplace") return K::laplace;
  if (s == "studentt") return K::studentt;
  if (s == "kotz") return K::kotz;
  if (s == "nm") return K::nm;
  if (s == "uniform") return K::uniform;
  if (s == "marexp") return K::marexp;
  if (s == "lnmix") return K::lnmix;
  if (s == "skewt") return K::skewt;
  throw config_error("unknown generator '" + s + "'");
}

WeightKernel parse_kernel_entry(const json& t) {
  const std::string name = t.value("kernel", "gauss");
  if (name == "gauss") return WeightKernel::gaussian();
  if (name == "stable") return WeightKernel::stable(t.value("b", 1.0));
  if (name == "glaplace") return WeightKernel::gen_laplace(t.value("b", 1.0));
  throw config_error("unknown kernel '" + name + "'");
}

double json_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw config_error(what + " must be a number");
  return v.get<double>();
}

}  // namespace

ExperimentSpec parse_experiment(const json& doc) {
  ExperimentSpec spec;
  try {
    spec.name = doc.value("name", "experiment");
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.trials = doc.value("trials", 200);
    for (const auto& v : doc.at("dims")) spec.dims.push_back(v.get<int>());
    for (const auto& v : doc.at("sizes")) spec.sizes.push_back(v.get<int>());

    const json& null_spec = doc.at("null");
    spec.null_family = parse_family_name(null_spec.at("family").get<std::string>());
    if (spec.null_family == Family::student_t) {
      spec.null_hyper = json_number(null_spec.at("nu"), "null.nu");
    } else if (spec.null_family == Family::kotz) {
      spec.null_hyper = json_number(null_spec.at("N"), "null.N");
    }

    const json& data = doc.at("data");
    spec.generator.kind = parse_generator_name(data.at("generator").get<std::string>());
    spec.generator.grid_param = data.value("grid_param", "");
    spec.generator.fixed_nu = data.value("nu", 12.0);
    const std::string loc = data.value("location", "zeros");
    if (loc == "zeros") {
      spec.generator.location = GeneratorSpec::Location::zeros;
    } else if (loc == "e_p") {
      spec.generator.location = GeneratorSpec::Location::e_p;
    } else {
      throw config_error("unknown location '" + loc + "'");
    }
    const std::string sc = data.value("scatter", "identity");
    if (sc == "identity") {
      spec.generator.scatter = GeneratorSpec::Scatter::identity;
    } else if (sc == "halfcorr") {
      spec.generator.scatter = GeneratorSpec::Scatter::halfcorr;
    } else {
      throw config_error("unknown scatter '" + sc + "'");
    }
    if (data.contains("grid")) {
      for (const auto& v : data.at("grid"))
        spec.grid.push_back(json_number(v, "grid value"));
    } else {
      spec.grid.push_back(0.0);
    }

    for (const auto& t : doc.at("tests")) {
      TestSpecEntry entry;
      entry.name = t.at("name").get<std::string>();
      entry.bhep = t.value("statistic", "cf") == "bhep";
      entry.m = t.value("m", 10);
      entry.M = t.value("M", 1000);
      entry.alpha = t.value("alpha", 0.05);
      if (entry.bhep) {
        entry.beta = t.value("beta", 1.0);
      } else {
        entry.kernel = parse_kernel_entry(t);
        const std::string agg = t.value("agg", "mean");
        if (agg == "mean") {
          entry.agg = Aggregation::mean;
        } else if (agg == "max") {
          entry.agg = Aggregation::max;
        } else {
          throw config_error("unknown aggregation '" + agg + "'");
        }
      }
      spec.tests.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  return parse_experiment(load_toml(path));
}

PowerTable run_experiment(const ExperimentSpec& spec, unsigned workers,
                          bool progress) {
  spec.validate();

  struct Cell {
    int p, n;
    double grid_value;
  };
  std::vector<Cell> cells;
  for (int p : spec.dims)
    for (int n : spec.sizes)
      for (double g : spec.grid) cells.push_back({p, n, g});

  const std::size_t n_cells = cells.size();
  const std::size_t n_tests = spec.tests.size();
  const std::size_t n_tasks = n_cells * static_cast<std::size_t>(spec.trials);

  // rejected[cell][test][trial]; failed[cell][trial]
  std::vector<std::uint8_t> rejected(n_cells * n_tests * spec.trials, 0);
  std::vector<std::uint8_t> failed(n_cells * spec.trials, 0);
  std::atomic<std::size_t> done{0};

  parallel_for(n_tasks, workers, [&](std::size_t task) {
    const std::size_t cell_idx = task / spec.trials;
    const std::size_t trial = task % spec.trials;
    const Cell& cell = cells[cell_idx];

    RngStream data_rng(spec.seed, derive_stream(kPhaseHarnessData, cell_idx, trial));
    const Sample x = spec.generator.generate(cell.n, cell.p, cell.grid_value, data_rng);

    try {
      for (std::size_t ti = 0; ti < n_tests; ++ti) {
        const TestSpecEntry& t = spec.tests[ti];
        const std::uint64_t test_seed =
            derive_stream(mix64(spec.seed) ^ (ti + 1), cell_idx, trial);
        bool reject;
        if (t.bhep) {
          BhepConfig cfg;
          cfg.beta = t.beta;
          cfg.M = t.M;
          cfg.alpha = t.alpha;
          cfg.seed = test_seed;
          reject = run_bhep_test(x, cfg).reject;
        } else {
          TestConfig cfg(FamilySpec::standard(spec.null_family, cell.p, spec.null_hyper));
          cfg.kernel = t.kernel;
          cfg.m = t.m;
          cfg.M = t.M;
          cfg.alpha = t.alpha;
          cfg.agg = t.agg;
          cfg.seed = test_seed;
          reject = run_test(x, cfg).reject;
        }
        rejected[(cell_idx * n_tests + ti) * spec.trials + trial] = reject ? 1 : 0;
      }
    } catch (const numeric_error&) {
      failed[cell_idx * spec.trials + trial] = 1;
    }

    if (progress) {
      const std::size_t d = done.fetch_add(1) + 1;
      const std::size_t step = n_tasks >= 50 ? n_tasks / 50 : 1;
      if (d % step == 0 || d == n_tasks) {
        std::fprintf(stderr, "\r[%s] %zu/%zu trials", spec.name.c_str(), d, n_tasks);
        if (d == n_tasks) std::fprintf(stderr, "\n");
      }
    }
  });

  PowerTable table;
  int total_failed = 0;
  for (std::size_t c = 0; c < n_cells; ++c) {
    int cell_failed = 0;
    for (int t = 0; t < spec.trials; ++t) cell_failed += failed[c * spec.trials + t];
    total_failed += cell_failed;
    const int completed = spec.trials - cell_failed;
    for (std::size_t ti = 0; ti < n_tests; ++ti) {
      int rejections = 0;
      for (int t = 0; t < spec.trials; ++t) {
        if (!failed[c * spec.trials + t])
          rejections += rejected[(c * n_tests + ti) * spec.trials + t];
      }
      PowerRow row;
      row.p = cells[c].p;
      row.n = cells[c].n;
      row.grid_value = cells[c].grid_value;
      row.test_name = spec.tests[ti].name;
      row.trials = completed;
      row.rejection_rate = completed > 0 ? static_cast<double>(rejections) / completed : 0.0;
      row.mc_stderr = completed > 0
                          ? std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) /
                                      completed)
                          : 0.0;
      table.rows.push_back(std::move(row));
    }
  }
  table.failed_trials = total_failed;
  if (total_failed > 0.01 * static_cast<double>(n_tasks)) {
    throw numeric_error("experiment aborted: " + std::to_string(total_failed) + " of " +
                        std::to_string(n_tasks) + " trials failed estimation");
  }
  return table;
}

void write_power_csv(const PowerTable& table, std::ostream& os) {
  os << "p,n,grid_value,test_name,rejection_rate,trials,mc_stderr\n";
  char buf[160];
  for (const auto& r : table.rows) {
    if (std::isinf(r.grid_value)) {
      std::snprintf(buf, sizeof buf, "%d,%d,inf,%s,%.6f,%d,%.6f", r.p, r.n,
                    r.test_name.c_str(), r.rejection_rate, r.trials, r.mc_stderr);
    } else {
      std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%s,%.6f,%d,%.6f", r.p, r.n,
                    r.grid_value, r.test_name.c_str(), r.rejection_rate, r.trials,
                    r.mc_stderr);
    }
    os << buf << '\n';
  }
}

void save_power_csv(const PowerTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + path);
  write_power_csv(table, out);
}

}  // namespace ellgof

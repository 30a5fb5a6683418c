// siou: command-line front end for set-indexed Ornstein-Uhlenbeck processes.
//
//   siou kernel   --input queries.json [--json out.json]
//   siou frontier --a 2,2 --b "1,2;2,1"
//   siou sample   --config run.json [--seed S] [--replicates N] [--csv out.csv] [--json out.json]
//   siou sheet    --config run.json [--seed S] [--replicates N] [--csv out.csv] [--json out.json]
//   siou verify   --suite deterministic|mc|all --seed S [--json report.json]
//
// Exit status: 0 success, 1 failed check or numerical error, 2 usage or config error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "siou/error.hpp"
#include "siou/io.hpp"
#include "siou/measure.hpp"
#include "siou/sheet.hpp"
#include "siou/simulator.hpp"
#include "siou/verify.hpp"

namespace {

using siou::Json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

void emit(const Json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw siou::ConfigError("cannot write '" + path + "'");
  out << text;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw siou::ConfigError("cannot write '" + path + "'");
  return out;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw siou::ConfigError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw siou::ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::string csv;
  std::string json;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Seed (overrides the config)");
  cmd->add_option("--replicates", flags.replicates, "Replicates (overrides the config)");
  cmd->add_option("--csv", flags.csv, "CSV output path (overrides the config)");
  cmd->add_option("--json", flags.json, "JSON output path (overrides the config)");
}

std::string default_sidecar(const std::string& csv) {
  const auto dot = csv.rfind('.');
  const auto slash = csv.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? csv.substr(0, dot) : csv) + ".json";
}

siou::RunConfig resolve(const RunFlags& flags) {
  siou::RunConfig config = siou::load_run_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.replicates) config.replicates = *flags.replicates;
  if (!flags.csv.empty()) config.csv_path = flags.csv;
  if (!flags.json.empty()) config.json_path = flags.json;
  siou::validate(config);
  if (!config.seed) throw siou::ConfigError("a seed is required (config 'seed' or --seed)");
  if (config.csv_path.empty()) throw siou::ConfigError("a CSV output path is required (config output.csv or --csv)");
  if (config.json_path.empty()) config.json_path = default_sidecar(config.csv_path);
  for (const auto& out : {config.csv_path, config.json_path}) {
    std::error_code ec;
    if (std::filesystem::equivalent(out, flags.config, ec)) {
      throw siou::ConfigError("output '" + out + "' would overwrite the config file");
    }
  }
  return config;
}

// kernel ----------------------------------------------------------------------

int run_kernel(const std::string& input, const std::string& output) {
  const Json doc = read_json(input);
  if (!doc.is_object()) throw siou::ConfigError("kernel input must be an object");
  siou::MeasureSpec measure = siou::MeasureSpec::lebesgue();
  if (doc.contains("measure")) measure = siou::measure_from_json(doc["measure"]);
  double lambda = 1.0;
  double sigma = 1.0;
  if (doc.contains("kernel")) {
    lambda = doc["kernel"].value("lambda", 1.0);
    sigma = doc["kernel"].value("sigma", 1.0);
  }
  std::optional<siou::KernelParams> params;
  try {
    params.emplace(lambda, sigma, measure);
  } catch (const siou::KernelError& e) {
    throw siou::ConfigError(e.what());
  }
  if (!doc.contains("queries") || !doc["queries"].is_array()) throw siou::ConfigError("kernel input needs a queries array");

  Json results = Json::array();
  for (const auto& q : doc["queries"]) {
    const std::string op = q.value("op", "");
    Json r = {{"op", op}};
    if (op == "cov_stationary" || op == "cov_dirac") {
      const auto u = siou::corner_from_json(q.value("u", Json()));
      const auto v = siou::corner_from_json(q.value("v", Json()));
      r["u"] = siou::to_json(u);
      r["v"] = siou::to_json(v);
      r["value"] = op == "cov_stationary" ? siou::cov_stationary(*params, u, v) : siou::cov_dirac(*params, u, v);
    } else if (op == "mean_dirac") {
      const auto u = siou::corner_from_json(q.value("u", Json()));
      const double x0 = q.value("x0", 0.0);
      r["u"] = siou::to_json(u);
      r["x0"] = x0;
      r["value"] = siou::mean_dirac(*params, x0, u);
    } else if (op == "transition") {
      const auto a = siou::corner_from_json(q.value("a", Json()));
      const auto b = siou::corners_from_json(q.value("b", Json::array()));
      const siou::Increment inc(a, b);
      const auto f = siou::frontier(inc);
      r["a"] = siou::to_json(a);
      r["b"] = siou::to_json(inc.b());
      r["frontier"] = siou::to_json(f);
      r["transition"] = siou::to_json(siou::transition_params(*params, a, f));
    } else {
      throw siou::ConfigError("unknown kernel op '" + op + "'");
    }
    results.push_back(std::move(r));
  }
  Json config = {{"measure", siou::to_json(measure)}, {"kernel", {{"lambda", lambda}, {"sigma", sigma}}}};
  emit({{"config", std::move(config)}, {"results", std::move(results)}}, output);
  return kOk;
}

// frontier --------------------------------------------------------------------

int run_frontier(const std::string& a_text, const std::string& b_text, bool strict, const std::string& output) {
  const auto a = siou::parse_corner(a_text);
  const auto b = siou::parse_corner_list(b_text);
  std::optional<siou::Increment> inc;
  try {
    inc.emplace(a, b);
  } catch (const siou::GeometryError& e) {
    throw siou::ConfigError(e.what());
  }
  const auto policy = strict ? siou::FrontierPolicy::unit_signs : siou::FrontierPolicy::multiplicity;
  const auto f = siou::frontier(*inc, policy);
  Json config = {{"a", siou::to_json(a)}, {"b", siou::to_json(inc->b())}, {"strict", strict}};
  emit({{"config", std::move(config)}, {"results", siou::to_json(f)}}, output);
  return kOk;
}

// sample ----------------------------------------------------------------------

int run_sample(const RunFlags& flags) {
  siou::RunConfig config = resolve(flags);
  if (config.corners.empty()) throw siou::ConfigError("sample needs corners");

  const auto params = config.kernel();
  const siou::Plan plan = siou::make_plan(config.corners, config.extension);
  const siou::SamplePath path =
      config.method == "exact"
          ? siou::simulate_exact(plan.corners, params, config.initial, config.replicates, config.rng_seed())
          : siou::simulate(plan, params, config.initial, config.replicates, config.rng_seed());

  std::vector<std::string> header;
  for (const auto& c : path.corners) header.push_back(siou::corner_label(c));
  auto csv = open_output(config.csv_path);
  siou::write_csv(csv, header, path.values);

  Json steps = Json::array();
  for (const auto& step : plan.steps) {
    const auto tp = siou::transition_params(params, step.increment.a(), step.frontier);
    steps.push_back({{"index", step.index},
                     {"corner", siou::to_json(step.increment.a())},
                     {"b", siou::to_json(step.increment.b())},
                     {"frontier", siou::to_json(step.frontier)},
                     {"frontier_index", step.frontier_index},
                     {"weights", siou::to_json(tp)["weights"]},
                     {"variance", tp.variance}});
  }
  Json corners = Json::array();
  for (const auto& c : plan.corners) corners.push_back(siou::to_json(c));
  Json result = {{"csv", config.csv_path}, {"corners", std::move(corners)}, {"steps", std::move(steps)}};
  emit({{"config", siou::to_json(config)}, {"results", Json::array({std::move(result)})}}, config.json_path);
  return kOk;
}

// sheet -----------------------------------------------------------------------

int run_sheet(const RunFlags& flags) {
  siou::RunConfig config = resolve(flags);
  if (!config.sheet) throw siou::ConfigError("sheet needs a 'sheet' section");
  auto& sheet = *config.sheet;
  if (sheet.points.empty()) throw siou::ConfigError("sheet needs points");

  const siou::GridSpec grid = [&] {
    try {
      return sheet.grid();
    } catch (const siou::RangeError& e) {
      throw siou::ConfigError(e.what());
    }
  }();
  sheet.truncation = grid.truncation();
  const Eigen::MatrixXd values = siou::simulate_sheet(grid, sheet.alpha, sheet.sigma, sheet.model, sheet.y0,
                                                      sheet.points, config.replicates, config.rng_seed());

  const auto dim = config.dimension;
  std::vector<std::string> header{"replicate"};
  for (Eigen::Index k = 0; k < dim; ++k) header.push_back("t_" + std::to_string(k + 1));
  header.push_back("value");
  const auto npts = static_cast<Eigen::Index>(sheet.points.size());
  Eigen::MatrixXd rows(values.rows() * npts, dim + 2);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index p = 0; p < npts; ++p) {
      const Eigen::Index row = r * npts + p;
      rows(row, 0) = static_cast<double>(r);
      rows.row(row).segment(1, dim) = sheet.points[static_cast<std::size_t>(p)].coords().transpose();
      rows(row, dim + 1) = values(r, p);
    }
  }
  auto csv = open_output(config.csv_path);
  siou::write_csv(csv, header, rows);

  const auto n = static_cast<double>(values.rows());
  const Eigen::VectorXd mean = values.colwise().mean().transpose();
  const Eigen::MatrixXd centered = values.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = n > 1 ? Eigen::MatrixXd(centered.transpose() * centered / (n - 1.0))
                                    : Eigen::MatrixXd::Zero(npts, npts);
  const auto kernel = siou::equivalent_kernel(sheet.alpha, sheet.sigma);
  auto theory = [&](const siou::Corner& s, const siou::Corner& t) {
    return sheet.model == siou::SheetModel::started ? siou::cov_dirac(kernel, s, t)
                                                    : siou::stationary_sheet_covariance(sheet.alpha, sheet.sigma, s, t);
  };

  Json pairs = Json::array();
  for (Eigen::Index i = 0; i < npts; ++i) {
    for (Eigen::Index j = i; j < npts; ++j) {
      const auto& s = sheet.points[static_cast<std::size_t>(i)];
      const auto& t = sheet.points[static_cast<std::size_t>(j)];
      const double th = theory(s, t);
      const double se = std::sqrt(std::max(0.0, theory(s, s) * theory(t, t) + th * th) / n);
      pairs.push_back({{"s", siou::to_json(s)},
                       {"t", siou::to_json(t)},
                       {"empirical", cov(i, j)},
                       {"theory", th},
                       {"discretized", siou::discretized_covariance(grid, sheet.alpha, sheet.sigma, s, t, sheet.model)},
                       {"standard_error", se}});
    }
  }
  Json means = Json::array();
  for (Eigen::Index p = 0; p < npts; ++p) {
    const auto& t = sheet.points[static_cast<std::size_t>(p)];
    const double expected =
        sheet.model == siou::SheetModel::started ? sheet.y0 * std::exp(-sheet.alpha.dot(t.coords())) : 0.0;
    means.push_back({{"t", siou::to_json(t)}, {"empirical", mean[p]}, {"theory", expected}});
  }
  Json result = {{"csv", config.csv_path},
                 {"truncation", grid.truncation()},
                 {"truncation_bound", siou::truncation_bound(sheet.alpha, grid.truncation())},
                 {"cells", grid.cell_count()},
                 {"means", std::move(means)},
                 {"covariances", std::move(pairs)}};
  emit({{"config", siou::to_json(config)}, {"results", Json::array({std::move(result)})}}, config.json_path);
  return kOk;
}

// verify ----------------------------------------------------------------------

int run_verify(const std::string& suite, std::uint64_t seed, bool flipped, const std::string& output) {
  siou::SuiteOptions options{seed, flipped ? siou::sign_flipped_model() : siou::stationary_model()};
  std::vector<siou::CheckReport> reports;
  if (suite == "deterministic" || suite == "all") reports = siou::deterministic_suite(options);
  if (suite == "mc" || suite == "all") {
    auto mc = siou::mc_suite(seed);
    reports.insert(reports.end(), mc.begin(), mc.end());
  }

  bool all_passed = true;
  Json results = Json::array();
  for (const auto& r : reports) {
    all_passed = all_passed && r.passed;
    results.push_back(siou::to_json(r));
    if (!output.empty() && output != "-") {
      std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  statistic=" << r.statistic
                << " tolerance=" << r.tolerance << "\n";
    }
  }
  Json config = {{"suite", suite}, {"seed", seed}, {"model", flipped ? "sign_flipped" : "stationary"}};
  emit({{"config", std::move(config)}, {"results", std::move(results)}}, output);
  return all_passed ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-indexed Ornstein-Uhlenbeck processes: kernels, sampling and verification"};
  app.require_subcommand(1);

  std::string kernel_input;
  std::string kernel_output;
  auto* kernel = app.add_subcommand("kernel", "Evaluate covariances and transition kernels from a JSON query file");
  kernel->add_option("--input", kernel_input, "Query file (JSON)")->required()->check(CLI::ExistingFile);
  kernel->add_option("--json", kernel_output, "Output path (default: stdout)");

  std::string a_text;
  std::string b_text;
  std::string frontier_output;
  bool strict = false;
  auto* frontier = app.add_subcommand("frontier", "Signed frontier of the increment [0,a] \\ (union of [0,b_i])");
  frontier->add_option("--a", a_text, "Top corner, e.g. 2,2")->required();
  frontier->add_option("--b", b_text, "Corners separated by ';', e.g. \"1,2;2,1\"");
  frontier->add_flag("--strict", strict, "Fail unless every coefficient is +1 or -1");
  frontier->add_option("--json", frontier_output, "Output path (default: stdout)");

  RunFlags sample_flags;
  auto* sample = app.add_subcommand("sample", "Simulate the process on a finite family of corners");
  add_run_flags(sample, sample_flags);

  RunFlags sheet_flags;
  auto* sheet = app.add_subcommand("sheet", "Simulate the Brownian-sheet integral representation");
  add_run_flags(sheet, sheet_flags);

  std::string suite = "deterministic";
  std::uint64_t seed = 0;
  std::string verify_output;
  bool flipped = false;
  auto* verify = app.add_subcommand("verify", "Run the verification suites");
  verify->add_option("--suite", suite, "deterministic, mc or all")
      ->check(CLI::IsMember({"deterministic", "mc", "all"}));
  verify->add_option("--seed", seed, "Seed")->required();
  verify->add_option("--json", verify_output, "Report path (default: stdout)");
  verify->add_flag("--sign-flipped", flipped, "Run against the sign-flipped kernel fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*kernel) return run_kernel(kernel_input, kernel_output);
    if (*frontier) return run_frontier(a_text, b_text, strict, frontier_output);
    if (*sample) return run_sample(sample_flags);
    if (*sheet) return run_sheet(sheet_flags);
    if (*verify) return run_verify(suite, seed, flipped, verify_output);
  } catch (const siou::ConfigError& e) {
    std::cerr << "siou: config error: " << e.what() << "\n";
    return kUsage;
  } catch (const siou::Error& e) {
    std::cerr << "siou: " << e.what() << "\n";
    return kFailure;
  } catch (const Json::exception& e) {
    std::cerr << "siou: config error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

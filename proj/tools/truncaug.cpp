#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "truncaug/catalog.hpp"
#include "truncaug/error.hpp"
#include "truncaug/io.hpp"
#include "truncaug/lyapunov.hpp"
#include "truncaug/scenario.hpp"
#include "truncaug/study.hpp"

namespace {

using namespace truncaug;

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write '" + path + "'");
  fn(out);
}

CatalogParams parse_params(const std::vector<std::string>& items) {
  CatalogParams params;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kConfig, "--param expects key=value, got '" + item + "'");
    }
    std::size_t used = 0;
    const std::string value = item.substr(eq + 1);
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw Error(ErrorCode::kConfig, "--param value is not a number: '" + item + "'");
    }
    params[item.substr(0, eq)] = v;
  }
  return params;
}

const std::map<std::string, TruncationKind> kTruncations = {
    {"interval", TruncationKind::kInterval},
    {"sublevel", TruncationKind::kSublevel},
    {"g_prefix", TruncationKind::kGPrefix}};
const std::map<std::string, AugmentationChoice> kAugmentations = {
    {"first", AugmentationChoice::kFirst},     {"last", AugmentationChoice::kLast},
    {"fixed", AugmentationChoice::kFixed},     {"linear", AugmentationChoice::kLinear},
    {"uniform", AugmentationChoice::kUniform}, {"random", AugmentationChoice::kRandom}};
const std::map<std::string, SolverChoice> kSolvers = {{"gth", SolverChoice::kGth},
                                                      {"power", SolverChoice::kPower}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncation-augmentation solver for countable Markov chains"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Stationary law of one truncation-augmentation");
  StudyConfig solve_config;
  std::vector<std::string> solve_params;
  double solve_value = 20;
  std::size_t solve_extreme = 0;
  std::string solve_out;
  std::string matrix_out;
  solve->add_option("--chain", solve_config.chain, "Catalog chain")
      ->required()
      ->check(CLI::IsMember(catalog_names()));
  solve->add_option("--param", solve_params, "Chain parameter key=value (repeatable)");
  solve->add_option("--truncation", solve_config.truncation, "interval | sublevel | g_prefix")
      ->transform(CLI::CheckedTransformer(kTruncations))
      ->capture_default_str();
  solve->add_option("--size,--level", solve_value, "n for interval, length for g_prefix, level for sublevel")
      ->capture_default_str();
  solve->add_option("--window", solve_config.window, "Search window for g-based sets")
      ->capture_default_str();
  solve->add_option("--augmentation", solve_config.augmentation,
                    "first | last | fixed | linear | uniform | random")
      ->transform(CLI::CheckedTransformer(kAugmentations));
  solve->add_option("--state", solve_config.fixed_state, "Target state for fixed augmentation");
  solve->add_option("--nu", solve_config.nu, "uniform | geometric:<ratio>")->capture_default_str();
  solve->add_option("--solver", solve_config.solver, "gth | power")
      ->transform(CLI::CheckedTransformer(kSolvers));
  solve->add_option("--seed", solve_config.seed, "Seed for random augmentation")->capture_default_str();
  solve->add_option("--extreme", solve_extreme, "Which extreme stationary law to write");
  solve->add_option("-o,--output", solve_out, "Distribution CSV (default stdout)");

  // study
  auto* study = app.add_subcommand("study", "Run a config-driven convergence study");
  std::string config_path;
  bool print_only = false;
  std::string study_out;
  std::string summary_out;
  study->add_option("--config", config_path, "Study config file")->required()->check(CLI::ExistingFile);
  study->add_flag("--print-config", print_only, "Print the full effective config and exit");
  study->add_option("-o,--output", study_out, "CSV path (overrides the config)");
  study->add_option("--summary", summary_out, "JSON summary path (with wall times)");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Reproduce a worked example; exit 0 iff it passes");
  std::string scenario_name;
  std::vector<std::string> scenario_choices = scenario_names();
  scenario_choices.push_back("all");
  scenario->add_option("name", scenario_name, "Scenario name or 'all'")
      ->required()
      ->check(CLI::IsMember(scenario_choices));

  // verify-drift
  auto* drift = app.add_subcommand("verify-drift", "Check a catalog Lyapunov certificate");
  std::string drift_chain;
  std::vector<std::string> drift_params;
  std::size_t drift_window = 200;
  std::string drift_out;
  drift->add_option("--chain", drift_chain, "Catalog chain")
      ->required()
      ->check(CLI::IsMember(catalog_names()));
  drift->add_option("--param", drift_params, "Chain parameter key=value (repeatable)");
  drift->add_option("--window", drift_window, "States 0..window-1 are checked")->capture_default_str();
  drift->add_option("-o,--output", drift_out, "Drift CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      solve_config.params = parse_params(solve_params);
      solve_config.grid = {solve_value};
      solve_config.reference = ReferenceChoice::kTruncation;
      solve_config.reference_size = std::max<std::size_t>(
          solve_config.reference_size, 4 * (static_cast<std::size_t>(solve_value) + 1));
      validate(solve_config);
      const CatalogEntry entry = catalog(solve_config.chain, solve_config.params);
      const PointSolution sol = solve_grid_point(solve_config, entry, 0);
      if (solve_extreme >= sol.extremes.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "--extreme out of range; multiplicity is " + std::to_string(sol.extremes.size()));
      }
      std::cerr << "set size " << sol.set.size() << ", multiplicity " << sol.extremes.size()
                << '\n';
      emit(solve_out, [&](std::ostream& out) {
        write_distribution_csv(out, sol.extremes[solve_extreme]);
      });
      return EXIT_SUCCESS;
    }

    if (*study) {
      StudyConfig config = load_study_config(config_path);
      if (!study_out.empty()) config.output = study_out;
      if (print_only) {
        std::cout << print_config(config);
        return EXIT_SUCCESS;
      }
      const StudyReport report = run_study(config);
      emit(config.output, [&](std::ostream& out) { write_study_csv(out, report); });
      if (!summary_out.empty()) {
        emit(summary_out, [&](std::ostream& out) { out << study_summary_json(report) << '\n'; });
      }
      return EXIT_SUCCESS;
    }

    if (*scenario) {
      const std::vector<std::string> names =
          scenario_name == "all" ? scenario_names() : std::vector<std::string>{scenario_name};
      bool pass = true;
      for (const std::string& name : names) {
        const ScenarioReport report = run_scenario(name);
        std::cout << scenario_json(report) << '\n';
        pass = pass && report.pass();
      }
      return pass ? EXIT_SUCCESS : EXIT_FAILURE;
    }

    if (*drift) {
      const CatalogEntry entry = catalog(drift_chain, parse_params(drift_params));
      if (!entry.certificate) {
        throw Error(ErrorCode::kInvalidArgument, drift_chain + " has no Lyapunov certificate");
      }
      const DriftReport report =
          entry.chain ? drift_check(*entry.chain, *entry.certificate, drift_window)
                      : rate_drift_check(*entry.rate_chain, *entry.certificate, drift_window);
      emit(drift_out, [&](std::ostream& out) { write_drift_csv(out, report); });
      std::cerr << (report.pass() ? "drift ok" : "drift violated") << ": worst relative slack "
                << report.worst_relative_slack << ", " << report.violations.size()
                << " violations\n";
      return report.pass() ? EXIT_SUCCESS : EXIT_FAILURE;
    }
  } catch (const Error& e) {
    std::cerr << "truncaug: " << e.what() << '\n';
    return 2;
  }
  return EXIT_FAILURE;
}

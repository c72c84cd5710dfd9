#include "truncaug/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <atomic>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "truncaug/augmentation.hpp"
#include "truncaug/error.hpp"
#include "truncaug/io.hpp"
#include "truncaug/rng.hpp"
#include "truncaug/solve.hpp"
#include "truncaug/truncation.hpp"

namespace truncaug {

namespace {

struct Names {
  static constexpr std::pair<TruncationKind, const char*> truncation[] = {
      {TruncationKind::kSublevel, "sublevel"},
      {TruncationKind::kGPrefix, "g_prefix"},
      {TruncationKind::kInterval, "interval"}};
  static constexpr std::pair<AugmentationChoice, const char*> augmentation[] = {
      {AugmentationChoice::kFirst, "first"},   {AugmentationChoice::kLast, "last"},
      {AugmentationChoice::kFixed, "fixed"},   {AugmentationChoice::kLinear, "linear"},
      {AugmentationChoice::kUniform, "uniform"}, {AugmentationChoice::kRandom, "random"}};
  static constexpr std::pair<SolverChoice, const char*> solver[] = {
      {SolverChoice::kGth, "gth"}, {SolverChoice::kPower, "power"}};
  static constexpr std::pair<ReferenceChoice, const char*> reference[] = {
      {ReferenceChoice::kAnalytic, "analytic"},
      {ReferenceChoice::kTruncation, "truncation"}};
};

template <typename E, std::size_t N>
const char* name_of(const std::pair<E, const char*> (&table)[N], E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_enum(const std::pair<E, const char*> (&table)[N], const std::string& text,
             const std::string& where) {
  for (const auto& [e, name] : table) {
    if (text == name) return e;
  }
  std::string options;
  for (const auto& [e, name] : table) options += std::string(options.empty() ? "" : "|") + name;
  throw Error(ErrorCode::kConfig, where + ": expected one of " + options + ", got '" + text + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') quoted = !quoted;
    if (line[k] == '#' && !quoted) return line.substr(0, k);
  }
  return line;
}

std::string as_string(const std::string& value, const std::string& where) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
    throw Error(ErrorCode::kConfig, where + ": expected a quoted string");
  }
  return value.substr(1, value.size() - 2);
}

double as_real(const std::string& value, const std::string& where) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::kConfig, where + ": expected a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t as_count(const std::string& value, const std::string& where) {
  const double v = as_real(value, where);
  if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
    throw Error(ErrorCode::kConfig, where + ": expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

// [a, b, c] or start:stop:step (inclusive stop).
std::vector<double> as_grid(const std::string& value, const std::string& where) {
  std::vector<double> out;
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') throw Error(ErrorCode::kConfig, where + ": unterminated array");
    std::stringstream ss(value.substr(1, value.size() - 2));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (!cell.empty()) out.push_back(as_real(cell, where));
    }
    return out;
  }
  std::vector<double> parts;
  std::stringstream ss(value);
  std::string cell;
  while (std::getline(ss, cell, ':')) parts.push_back(as_real(trim(cell), where));
  if (parts.size() != 3 || !(parts[2] > 0.0)) {
    throw Error(ErrorCode::kConfig, where + ": expected [a, b, ...] or start:stop:step");
  }
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t k = 0; k <= count && parts[0] <= parts[1]; ++k) {
    out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
  }
  return out;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  StudyConfig config;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::string at = "line " + std::to_string(lineno);
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "chain" && section != "truncation" && section != "augmentation" &&
          section != "solver" && section != "reference" && section != "output") {
        throw Error(ErrorCode::kConfig, at + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, at + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = at + " (" + (section.empty() ? "" : section + ".") + key + ")";
    auto unknown = [&] { throw Error(ErrorCode::kConfig, where + ": unknown key"); };

    if (section.empty()) {
      if (key == "seed") config.seed = as_count(value, where);
      else if (key == "output") config.output = as_string(value, where);
      else unknown();
    } else if (section == "output") {
      if (key == "path") config.output = as_string(value, where);
      else unknown();
    } else if (section == "chain") {
      if (key == "name") config.chain = as_string(value, where);
      else config.params[key] = as_real(value, where);
    } else if (section == "truncation") {
      if (key == "kind") config.truncation = parse_enum(Names::truncation, as_string(value, where), where);
      else if (key == "grid") config.grid = as_grid(value, where);
      else if (key == "window") config.window = as_count(value, where);
      else unknown();
    } else if (section == "augmentation") {
      if (key == "kind") config.augmentation = parse_enum(Names::augmentation, as_string(value, where), where);
      else if (key == "state") config.fixed_state = as_count(value, where);
      else if (key == "nu") config.nu = as_string(value, where);
      else unknown();
    } else if (section == "solver") {
      if (key == "kind") config.solver = parse_enum(Names::solver, as_string(value, where), where);
      else if (key == "tol") config.power_tol = as_real(value, where);
      else if (key == "max_iter") config.power_max_iter = as_count(value, where);
      else unknown();
    } else if (section == "reference") {
      if (key == "kind") {
        const std::string kind = as_string(value, where);
        if (kind == "auto") config.reference.reset();
        else config.reference = parse_enum(Names::reference, kind, where);
      } else if (key == "size") {
        config.reference_size = as_count(value, where);
      } else {
        unknown();
      }
    }
  }
  return config;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config '" + path + "'");
  return parse_study_config(in);
}

std::string print_config(const StudyConfig& config) {
  CatalogParams params = catalog_defaults(config.chain);
  for (const auto& [key, value] : config.params) params[key] = value;

  std::ostringstream out;
  out << "seed = " << config.seed << '\n';
  out << "output = " << quoted(config.output) << "\n\n";
  out << "[chain]\n";
  out << "name = " << quoted(config.chain) << '\n';
  for (const auto& [key, value] : params) out << key << " = " << format_real(value) << '\n';
  out << "\n[truncation]\n";
  out << "kind = " << quoted(name_of(Names::truncation, config.truncation)) << '\n';
  out << "grid = [";
  for (std::size_t k = 0; k < config.grid.size(); ++k) {
    out << (k ? ", " : "") << format_real(config.grid[k]);
  }
  out << "]\n";
  out << "window = " << config.window << '\n';
  out << "\n[augmentation]\n";
  out << "kind = " << quoted(name_of(Names::augmentation, config.augmentation)) << '\n';
  out << "state = " << config.fixed_state << '\n';
  out << "nu = " << quoted(config.nu) << '\n';
  out << "\n[solver]\n";
  out << "kind = " << quoted(name_of(Names::solver, config.solver)) << '\n';
  out << "tol = " << format_real(config.power_tol) << '\n';
  out << "max_iter = " << config.power_max_iter << '\n';
  out << "\n[reference]\n";
  out << "kind = "
      << quoted(config.reference ? name_of(Names::reference, *config.reference) : "auto")
      << '\n';
  out << "size = " << config.reference_size << '\n';
  return out.str();
}

namespace {

struct NuSpec {
  bool uniform = true;
  double ratio = 1.0;
};

NuSpec parse_nu(const std::string& spec) {
  if (spec == "uniform") return {true, 1.0};
  const std::string prefix = "geometric:";
  if (spec.rfind(prefix, 0) == 0) {
    const double ratio = as_real(spec.substr(prefix.size()), "augmentation.nu");
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw Error(ErrorCode::kConfig, "augmentation.nu: geometric ratio must be in (0, 1]");
    }
    return {false, ratio};
  }
  throw Error(ErrorCode::kConfig,
              "augmentation.nu: expected \"uniform\" or \"geometric:<ratio>\", got '" + spec + "'");
}

}  // namespace

void validate(const StudyConfig& config) {
  const CatalogEntry entry = [&] {
    try {
      return catalog(config.chain, config.params);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, "chain: " + e.detail());
    }
  }();
  if (config.grid.empty()) throw Error(ErrorCode::kConfig, "truncation.grid is empty");
  for (std::size_t k = 1; k < config.grid.size(); ++k) {
    if (!(config.grid[k] > config.grid[k - 1])) {
      throw Error(ErrorCode::kConfig, "truncation.grid must be strictly increasing");
    }
  }
  if (config.truncation != TruncationKind::kSublevel) {
    for (double v : config.grid) {
      if (v < 0.0 || v != std::floor(v)) {
        throw Error(ErrorCode::kConfig, "truncation.grid entries must be nonnegative integers");
      }
    }
    if (config.truncation == TruncationKind::kGPrefix && config.grid.front() < 1.0) {
      throw Error(ErrorCode::kConfig, "g_prefix lengths must be >= 1");
    }
    const double largest = config.grid.back() + (config.truncation == TruncationKind::kInterval ? 1.0 : 0.0);
    if (static_cast<double>(config.reference_size) < 4.0 * largest) {
      throw Error(ErrorCode::kConfig, "reference.size must be at least 4x the largest truncation");
    }
  }
  if (config.truncation != TruncationKind::kInterval && !entry.certificate) {
    throw Error(ErrorCode::kConfig, config.chain + " has no Lyapunov function for g-based truncation");
  }
  if (config.window < 1) throw Error(ErrorCode::kConfig, "truncation.window must be >= 1");
  parse_nu(config.nu);
  if (entry.rate_chain && config.augmentation == AugmentationChoice::kRandom) {
    throw Error(ErrorCode::kConfig, "random augmentation is not defined for rate chains");
  }
  if (config.reference == ReferenceChoice::kAnalytic && !entry.analytic_pi) {
    throw Error(ErrorCode::kConfig, config.chain + " has no analytic stationary law");
  }
  if (config.reference_size < 1) throw Error(ErrorCode::kConfig, "reference.size must be >= 1");
  if (!(config.power_tol > 0.0)) throw Error(ErrorCode::kConfig, "solver.tol must be positive");
}

namespace {

TruncationSet build_set(const StudyConfig& config, const CatalogEntry& entry, double value) {
  switch (config.truncation) {
    case TruncationKind::kInterval:
      return interval_set(static_cast<std::size_t>(value));
    case TruncationKind::kGPrefix:
      return g_ordered_prefix(entry.certificate->g, static_cast<std::size_t>(value), config.window);
    case TruncationKind::kSublevel:
      break;
  }
  return sublevel_set(entry.certificate->g, value, config.window);
}

Distribution linear_nu(const NuSpec& spec, const TruncationSet& set) {
  std::vector<StateIndex> states(set.states().begin(), set.states().end());
  if (spec.uniform) return Distribution::uniform(std::move(states));
  std::vector<double> w(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    w[k] = std::pow(spec.ratio, static_cast<double>(states[k] - set.min()));
  }
  return Distribution::from_weights(std::move(states), std::move(w));
}

std::vector<Distribution> solve_all(const StudyConfig& config, const FiniteStochastic& P) {
  if (config.solver == SolverChoice::kGth) return stationary_set(P).extremes;
  const ClosedClassDecomposition d = closed_classes(P);
  if (d.classes.size() != 1) {
    throw Error(ErrorCode::kMultipleClosedClasses,
                "power solver needs a unique closed class, found " +
                    std::to_string(d.classes.size()));
  }
  std::vector<StateIndex> members;
  for (std::size_t i : d.classes.front()) members.push_back(P.states()[i]);
  std::sort(members.begin(), members.end());
  const Distribution mu0 = Distribution::uniform(std::move(members));
  const Distribution pi = power_iteration(P, mu0, config.power_tol, config.power_max_iter);
  return {from_local(P.states(), to_local(P, pi))};
}

struct Reference {
  ReferenceChoice kind;
  std::optional<Distribution> pi;
};

Reference build_reference(const StudyConfig& config, const CatalogEntry& entry) {
  const ReferenceChoice kind = config.reference.value_or(
      entry.analytic_pi && entry.analytic_tail ? ReferenceChoice::kAnalytic
                                               : ReferenceChoice::kTruncation);
  if (kind == ReferenceChoice::kAnalytic) return {kind, std::nullopt};
  const TruncationSet set = interval_set(config.reference_size - 1);
  if (entry.chain) {
    const AugmentedMatrix aug = augment_first_state(northwest_corner(*entry.chain, set));
    return {kind, stationary_set(aug.matrix).extremes.front()};
  }
  const RateAugmented aug = augment_rate_block(northwest_corner(*entry.rate_chain, set),
                                               FixedStateRateStrategy{set.min()});
  return {kind, ctmc_stationary_set(aug.matrix).extremes.front()};
}

}  // namespace

PointSolution solve_grid_point(const StudyConfig& config, const CatalogEntry& entry,
                               std::size_t k) {
  const double value = config.grid.at(k);
  const TruncationSet set = build_set(config, entry, value);
  const NuSpec nu = parse_nu(config.nu);

  std::vector<Distribution> extremes;
  if (entry.chain) {
    const TruncationBlock block = northwest_corner(*entry.chain, set);
    const AugmentedMatrix aug = [&] {
      switch (config.augmentation) {
        case AugmentationChoice::kFirst: return augment_first_state(block);
        case AugmentationChoice::kLast: return augment_last_state(block);
        case AugmentationChoice::kFixed: return augment_fixed_state(block, config.fixed_state);
        case AugmentationChoice::kLinear: return augment_linear(block, linear_nu(nu, set));
        case AugmentationChoice::kUniform:
          return augment_general(block, uniform_redistribution(block));
        case AugmentationChoice::kRandom:
          break;
      }
      std::mt19937_64 engine = substream(config.seed, k);
      return augment_general(block, random_redistribution(block, engine()));
    }();
    extremes = solve_all(config, aug.matrix);
  } else {
    const RateBlock block = northwest_corner(*entry.rate_chain, set);
    RateStrategy strategy = FixedStateRateStrategy{set.min()};
    switch (config.augmentation) {
      case AugmentationChoice::kFirst: break;
      case AugmentationChoice::kLast: strategy = FixedStateRateStrategy{set.max()}; break;
      case AugmentationChoice::kFixed: strategy = FixedStateRateStrategy{config.fixed_state}; break;
      case AugmentationChoice::kLinear: strategy = LinearRateStrategy{linear_nu(nu, set)}; break;
      case AugmentationChoice::kUniform: strategy = LinearRateStrategy{linear_nu({}, set)}; break;
      case AugmentationChoice::kRandom:
        throw Error(ErrorCode::kConfig, "random augmentation is not defined for rate chains");
    }
    const RateAugmented aug = augment_rate_block(block, strategy);
    if (config.solver == SolverChoice::kGth) {
      extremes = ctmc_stationary_set(aug.matrix).extremes;
    } else {
      extremes = solve_all(config, uniformize(aug.matrix));
    }
  }

  return {set, std::move(extremes)};
}

namespace {

std::vector<StudyRow> solve_point(const StudyConfig& config, const CatalogEntry& entry,
                                  const Reference& reference, std::size_t k) {
  const auto start = std::chrono::steady_clock::now();
  const double value = config.grid[k];
  const auto [set, extremes] = solve_grid_point(config, entry, k);
  if (config.reference_size < 4 * (set.max() + 1)) {
    throw Error(ErrorCode::kConfig, "reference.size must be at least 4x the largest truncation (set max " +
                                        std::to_string(set.max()) + ")");
  }
  std::vector<StudyRow> rows;
  for (std::size_t e = 0; e < extremes.size(); ++e) {
    StudyRow row;
    row.grid_value = value;
    row.set_size = set.size();
    row.set_max = set.max();
    row.extreme = e;
    row.multiplicity = extremes.size();
    row.tv = reference.pi ? tv_distance(extremes[e], *reference.pi)
                          : tv_to_analytic(extremes[e], entry);
    if (entry.certificate) row.drift_bound = extremes[e].expectation(entry.certificate->r);
    rows.push_back(row);
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  for (StudyRow& row : rows) row.wall_ms = ms;
  return rows;
}

}  // namespace

StudyReport run_study(const StudyConfig& config) {
  validate(config);
  const CatalogEntry entry = catalog(config.chain, config.params);
  const Reference reference = build_reference(config, entry);

  // Grid points are independent; workers pull indices and rows are merged
  // back in grid order.
  const std::size_t n = config.grid.size();
  std::vector<std::vector<StudyRow>> results(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        results[k] = solve_point(config, entry, reference, k);
      } catch (const Error& e) {
        failures[k] = std::make_exception_ptr(
            Error(e.code(), "grid point " + std::to_string(k) + " (" +
                                format_real(config.grid[k]) + "): " + e.detail()));
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  StudyReport report;
  report.chain = config.chain;
  report.reference = name_of(Names::reference, reference.kind);
  for (auto& rows : results) {
    for (StudyRow& row : rows) report.rows.push_back(row);
  }
  return report;
}

void write_study_csv(std::ostream& out, const StudyReport& report) {
  out << "grid,set_size,set_max,extreme,multiplicity,tv,drift_bound\n";
  for (const StudyRow& row : report.rows) {
    out << format_real(row.grid_value) << ',' << row.set_size << ',' << row.set_max << ','
        << row.extreme << ',' << row.multiplicity << ',' << format_real(row.tv) << ','
        << (row.drift_bound ? format_real(*row.drift_bound) : "") << '\n';
  }
}

std::string study_summary_json(const StudyReport& report) {
  nlohmann::ordered_json j;
  j["chain"] = report.chain;
  j["reference"] = report.reference;
  j["rows"] = nlohmann::ordered_json::array();
  for (const StudyRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["grid"] = row.grid_value;
    r["set_size"] = row.set_size;
    r["set_max"] = row.set_max;
    r["extreme"] = row.extreme;
    r["multiplicity"] = row.multiplicity;
    r["tv"] = row.tv;
    r["drift_bound"] = row.drift_bound ? nlohmann::ordered_json(*row.drift_bound) : nullptr;
    r["wall_ms"] = row.wall_ms;
    j["rows"].push_back(r);
  }
  return j.dump(2);
}

}  // namespace truncaug

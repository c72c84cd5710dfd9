#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "truncaug/catalog.hpp"
#include "truncaug/truncation.hpp"

namespace truncaug {

enum class TruncationKind { kSublevel, kGPrefix, kInterval };
enum class AugmentationChoice { kFirst, kLast, kFixed, kLinear, kUniform, kRandom };
enum class SolverChoice { kGth, kPower };
enum class ReferenceChoice { kAnalytic, kTruncation };

/// Effective configuration of a truncation-augmentation study.
struct StudyConfig {
  std::string chain = "example1";
  CatalogParams params;

  TruncationKind truncation = TruncationKind::kInterval;
  /// Levels (sublevel), prefix lengths (g_prefix) or n (interval).
  std::vector<double> grid = {10, 20, 40};
  std::size_t window = 10000;

  AugmentationChoice augmentation = AugmentationChoice::kLast;
  StateIndex fixed_state = 0;
  /// "uniform" or "geometric:<ratio>" (fixed-linear weights ratio^x).
  std::string nu = "geometric:0.5";

  SolverChoice solver = SolverChoice::kGth;
  double power_tol = 1e-12;
  std::size_t power_max_iter = 1000000;

  /// Analytic when the chain has one; otherwise first-state GTH over
  /// {0..reference_size-1}.
  std::optional<ReferenceChoice> reference;
  std::size_t reference_size = 2000;

  std::uint64_t seed = 7;
  std::string output;
};

/// Parses the TOML-style text format written by print_config. Unknown keys
/// and malformed values throw ErrorCode::kConfig.
StudyConfig parse_study_config(std::istream& in);
StudyConfig load_study_config(const std::string& path);

/// Full effective configuration, every default spelled out.
std::string print_config(const StudyConfig& config);

/// Grid nonempty and strictly increasing, parameters in range.
void validate(const StudyConfig& config);

/// One row per grid point per extreme stationary law.
struct StudyRow {
  double grid_value = 0.0;
  std::size_t set_size = 0;
  StateIndex set_max = 0;
  std::size_t extreme = 0;
  std::size_t multiplicity = 0;
  double tv = 0.0;
  std::optional<double> drift_bound;
  double wall_ms = 0.0;
};

struct StudyReport {
  std::string chain;
  std::string reference;
  std::vector<StudyRow> rows;
};

StudyReport run_study(const StudyConfig& config);

struct PointSolution {
  TruncationSet set;
  /// One extreme stationary law per closed class of the augmented matrix.
  std::vector<Distribution> extremes;
};

/// Truncate, augment and solve at grid point k of an already validated
/// config. Random augmentations draw from substream (seed, k).
PointSolution solve_grid_point(const StudyConfig& config, const CatalogEntry& entry,
                               std::size_t k);

/// Deterministic CSV (wall time excluded):
/// grid,set_size,set_max,extreme,multiplicity,tv,drift_bound
void write_study_csv(std::ostream& out, const StudyReport& report);
/// JSON summary including wall times.
std::string study_summary_json(const StudyReport& report);

}  // namespace truncaug

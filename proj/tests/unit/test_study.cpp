#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "truncaug/catalog.hpp"
#include "truncaug/error.hpp"
#include "truncaug/scenario.hpp"
#include "truncaug/solve.hpp"
#include "truncaug/study.hpp"

namespace truncaug {
namespace {

StudyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_study_config(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::kInvalidArgument;
}

std::string csv_of(const StudyReport& report) {
  std::ostringstream out;
  write_study_csv(out, report);
  return out.str();
}

TEST(StudyConfig, ParsesEverySection) {
  const StudyConfig c = parse(R"(# comment
seed = 11
[chain]
name = "birth_death"
p = 0.25
[truncation]
kind = "sublevel"
grid = 2:10:2   # start:stop:step
window = 500
[augmentation]
kind = "linear"
nu = "uniform"
[solver]
kind = "power"
tol = 1e-10
max_iter = 5000
[reference]
kind = "truncation"
size = 300
[output]
path = "out.csv"
)");
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.chain, "birth_death");
  EXPECT_EQ(c.params.at("p"), 0.25);
  EXPECT_EQ(c.truncation, TruncationKind::kSublevel);
  EXPECT_EQ(c.grid, (std::vector<double>{2, 4, 6, 8, 10}));
  EXPECT_EQ(c.window, 500u);
  EXPECT_EQ(c.augmentation, AugmentationChoice::kLinear);
  EXPECT_EQ(c.nu, "uniform");
  EXPECT_EQ(c.solver, SolverChoice::kPower);
  EXPECT_EQ(c.power_tol, 1e-10);
  EXPECT_EQ(c.power_max_iter, 5000u);
  EXPECT_EQ(c.reference, ReferenceChoice::kTruncation);
  EXPECT_EQ(c.reference_size, 300u);
  EXPECT_EQ(c.output, "out.csv");
}

TEST(StudyConfig, PrintRoundTrips) {
  for (const std::string& text :
       {std::string(""), std::string("[chain]\nname = \"mm1_rates\"\nlam = 0.5\n"),
        std::string("[truncation]\nkind = \"g_prefix\"\ngrid = [3, 9, 27]\n[augmentation]\n"
                    "kind = \"fixed\"\nstate = 1\n")}) {
    const StudyConfig c = parse(text);
    const std::string printed = print_config(c);
    EXPECT_EQ(print_config(parse(printed)), printed);
  }
  // Defaults are spelled out, including catalog parameters.
  const std::string defaults = print_config(StudyConfig{});
  EXPECT_NE(defaults.find("theta = 0.4"), std::string::npos);
  EXPECT_NE(defaults.find("window = 10000"), std::string::npos);
  EXPECT_NE(defaults.find("seed = 7"), std::string::npos);
}

TEST(StudyConfig, RejectsMalformedInput) {
  EXPECT_EQ(parse_error("[nonsense]\n"), ErrorCode::kConfig);
  EXPECT_EQ(parse_error("[chain]\ncolour = \"red\"\n"), ErrorCode::kConfig);
  EXPECT_EQ(parse_error("[truncation]\nkind = \"spiral\"\n"), ErrorCode::kConfig);
  EXPECT_EQ(parse_error("[truncation]\ngrid = [1, x]\n"), ErrorCode::kConfig);
  EXPECT_EQ(parse_error("[solver]\ntol = \n"), ErrorCode::kConfig);
  EXPECT_EQ(parse_error("seed\n"), ErrorCode::kConfig);
  try {
    parse("seed = 1\n\n[augmentation]\nkind = \"sideways\"\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(e.detail().find("line 4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_study_config("/nonexistent/config.toml"), Error);
}

TEST(StudyConfig, ValidateRejectsBadGrids) {
  StudyConfig c;
  c.grid = {};
  EXPECT_THROW(validate(c), Error);
  c.grid = {10, 10};
  EXPECT_THROW(validate(c), Error);
  c.grid = {20, 10};
  EXPECT_THROW(validate(c), Error);
  c.grid = {2.5};
  EXPECT_THROW(validate(c), Error);
  c.grid = {10, 600};  // reference must cover 4x the largest set
  EXPECT_THROW(validate(c), Error);
  c.grid = {10};
  EXPECT_NO_THROW(validate(c));
  c.chain = "unknown";
  EXPECT_THROW(validate(c), Error);

  StudyConfig rate;
  rate.chain = "mm1_rates";
  rate.augmentation = AugmentationChoice::kRandom;
  EXPECT_THROW(validate(rate), Error);

  StudyConfig nu;
  nu.augmentation = AugmentationChoice::kLinear;
  nu.nu = "geometric:1.5";
  EXPECT_THROW(validate(nu), Error);

  StudyConfig no_analytic;
  no_analytic.chain = "hessenberg_demo";
  no_analytic.reference = ReferenceChoice::kAnalytic;
  EXPECT_THROW(validate(no_analytic), Error);

  StudyConfig no_cert;
  no_cert.chain = "reset_chain";
  no_cert.truncation = TruncationKind::kSublevel;
  EXPECT_THROW(validate(no_cert), Error);
}

// Odd n with last-state augmentation: all mass sits on n.
TEST(RunStudy, IntervalLastStateOnOddGrid) {
  StudyConfig c;
  c.grid = {3, 5, 7, 9};
  const StudyReport report = run_study(c);
  const CatalogEntry e1 = example1(0.4);
  ASSERT_EQ(report.rows.size(), 4u);
  for (const StudyRow& row : report.rows) {
    const auto n = static_cast<StateIndex>(row.grid_value);
    EXPECT_EQ(row.multiplicity, 1u);
    EXPECT_EQ(row.set_max, n);
    EXPECT_NEAR(row.tv, 1.0 - (*e1.analytic_pi)(n), 1e-15);
  }
}

TEST(RunStudy, SublevelRandomAugmentationConverges) {
  StudyConfig c;
  c.truncation = TruncationKind::kSublevel;
  c.augmentation = AugmentationChoice::kRandom;
  c.grid.clear();
  for (int i = 1; i <= 30; ++i) c.grid.push_back(std::exp(0.4 * (i + 0.75)));
  const StudyReport report = run_study(c);
  const StudyRow& last = report.rows.back();
  EXPECT_LT(last.tv, 1e-3);
  for (const StudyRow& row : report.rows) {
    ASSERT_TRUE(row.drift_bound.has_value());
    EXPECT_LE(*row.drift_bound, 0.5 + 1e-9);
  }
}

TEST(RunStudy, BirthDeathAndRateChains) {
  StudyConfig bd;
  bd.chain = "birth_death";
  bd.grid = {60};
  EXPECT_LE(run_study(bd).rows[0].tv, 1e-6);

  StudyConfig mm1;
  mm1.chain = "mm1_rates";
  mm1.grid = {60};
  for (AugmentationChoice a : {AugmentationChoice::kFirst, AugmentationChoice::kLast,
                               AugmentationChoice::kUniform, AugmentationChoice::kLinear}) {
    mm1.augmentation = a;
    EXPECT_LE(run_study(mm1).rows[0].tv, 1e-6);
  }
}

TEST(RunStudy, RerunsAreByteIdentical) {
  StudyConfig c;
  c.truncation = TruncationKind::kGPrefix;
  c.augmentation = AugmentationChoice::kRandom;
  c.grid = {5, 17, 40, 90};
  const std::string first = csv_of(run_study(c));
  EXPECT_EQ(csv_of(run_study(c)), first);
  c.seed = 8;
  EXPECT_NE(csv_of(run_study(c)), first);
}

// Every state of Example 1 reaches 0, so fixed-state augmentation leaves a
// single closed class.
TEST(RunStudy, FixedStateAugmentationHasOneClass) {
  StudyConfig c;
  c.augmentation = AugmentationChoice::kFixed;
  c.fixed_state = 0;
  c.grid = {4, 8};
  for (const StudyRow& row : run_study(c).rows) EXPECT_EQ(row.multiplicity, 1u);

  const CatalogEntry e1 = example1(0.4);
  for (std::size_t k = 0; k < 2; ++k) {
    const PointSolution p = solve_grid_point(c, e1, k);
    EXPECT_EQ(p.extremes.size(), 1u);
    EXPECT_EQ(p.set.max(), static_cast<StateIndex>(c.grid[k]));
  }
}

TEST(RunStudy, PowerSolverAgreesWithGth) {
  StudyConfig c;
  c.chain = "birth_death";
  c.grid = {10, 30};
  const StudyReport gth = run_study(c);
  c.solver = SolverChoice::kPower;
  const StudyReport power = run_study(c);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(gth.rows[i].tv, power.rows[i].tv, 1e-8);
}

TEST(RunStudy, TruncationReferenceMatchesAnalytic) {
  StudyConfig c;
  c.chain = "birth_death";
  c.grid = {5, 15};
  const StudyReport analytic = run_study(c);
  c.reference = ReferenceChoice::kTruncation;
  const StudyReport truncated = run_study(c);
  EXPECT_EQ(analytic.reference, "analytic");
  EXPECT_NE(truncated.reference, "analytic");
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(analytic.rows[i].tv, truncated.rows[i].tv, 1e-12);

  StudyConfig h;
  h.chain = "hessenberg_demo";
  h.grid = {10, 40};
  const StudyReport hs = run_study(h);
  EXPECT_LT(hs.rows[1].tv, hs.rows[0].tv);
}

TEST(RunStudy, CsvLayoutAndJsonSummary) {
  StudyConfig c;
  c.grid = {3};
  const StudyReport report = run_study(c);
  const std::string csv = csv_of(report);
  EXPECT_EQ(csv.rfind("grid,set_size,set_max,extreme,multiplicity,tv,drift_bound\n3,4,3,0,1,", 0), 0u);
  const std::string json = study_summary_json(report);
  EXPECT_NE(json.find("\"wall_ms\""), std::string::npos);
}

TEST(Scenarios, AllPass) {
  for (const std::string& name : scenario_names()) {
    const ScenarioReport report = run_scenario(name);
    EXPECT_TRUE(report.pass()) << scenario_json(report);
    EXPECT_FALSE(report.checks.empty());
  }
  EXPECT_THROW(run_scenario("missing"), Error);
}

}  // namespace
}  // namespace truncaug

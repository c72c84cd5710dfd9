// Exit gate: one PASS/FAIL line per acceptance criterion, nonzero exit if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../unit/test_util.hpp"
#include "truncaug/augmentation.hpp"
#include "truncaug/catalog.hpp"
#include "truncaug/lyapunov.hpp"
#include "truncaug/scenario.hpp"
#include "truncaug/solve.hpp"

namespace {

using namespace truncaug;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_ms;  // <= 0 means no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome from_scenario(const std::string& name) {
  const ScenarioReport report = run_scenario(name);
  Outcome out{report.pass(), ""};
  for (const ScenarioCheck& c : report.checks) {
    if (!c.pass) out.detail += "failed: " + c.label + "; ";
  }
  for (const auto& [key, value] : report.metrics) {
    if (!out.detail.empty()) out.detail += ' ';
    out.detail += key + "=" + fmt(value);
  }
  return out;
}

// Sublevel grid and augmentations shared by the Lyapunov criteria.
std::vector<Distribution> example1_lyapunov_solutions() {
  const CatalogEntry entry = example1(0.4);
  const LyapunovCertificate& cert = *entry.certificate;
  std::vector<Distribution> all;
  for (int i = 1; i <= 40; ++i) {
    const TruncationSet set = sublevel_set(cert.g, std::exp(0.4 * (i + 0.75)), 10000);
    const TruncationBlock block = northwest_corner(*entry.chain, set);
    for (const AugmentedMatrix& aug :
         {augment_first_state(block), augment_last_state(block),
          augment_general(block, uniform_redistribution(block)),
          augment_general(block, random_redistribution(block, 7 + static_cast<unsigned>(i)))}) {
      const StationarySet solved = stationary_set(aug.matrix);
      all.insert(all.end(), solved.extremes.begin(), solved.extremes.end());
    }
  }
  return all;
}

Outcome drift_machinery() {
  const CatalogEntry entry = example1(0.4);
  const LyapunovCertificate& cert = *entry.certificate;
  Outcome out;

  // Absolute slack where g stays small enough for doubles to resolve the
  // zero-slack identity; relative slack over the full window.
  double worst_abs = 0.0;
  const DriftReport near = drift_check(*entry.chain, cert, 60);
  for (const DriftEntry& e : near.entries) {
    if (e.state % 2 == 0) worst_abs = std::max(worst_abs, std::abs(e.slack));
  }
  double worst_rel = 0.0;
  const DriftReport full = drift_check(*entry.chain, cert, 200);
  for (const DriftEntry& e : full.entries) {
    if (e.state % 2 == 0) worst_rel = std::max(worst_rel, std::abs(e.relative_slack));
  }
  double worst_moment = 0.0;
  for (const Distribution& pi : example1_lyapunov_solutions()) {
    worst_moment = std::max(worst_moment, stationary_bound_check(pi, cert).value);
  }
  out.pass = near.pass() && full.pass() && worst_abs <= 1e-9 && worst_rel <= 1e-9 &&
             worst_moment <= 0.5 + 1e-9;
  out.detail = "window60_max_even_abs_slack=" + fmt(worst_abs) +
               " window200_max_even_rel_slack=" + fmt(worst_rel) +
               " window200_pass=" + (full.pass() ? "1" : "0") +
               " max_sum_pi_r=" + fmt(worst_moment);
  return out;
}

Outcome monotone_chain() {
  const CatalogEntry bd = birth_death(0.3);
  const bool monotone = monotonicity_check(*bd.chain, 200).monotone();
  const Distribution pi =
      gth_stationary(augment_last_state(northwest_corner(*bd.chain, interval_set(60))).matrix);
  const double tv = tv_to_analytic(pi, bd);
  return {monotone && tv <= 1e-6,
          std::string("monotone=") + (monotone ? "1" : "0") + " tv_n60=" + fmt(tv)};
}

Outcome solver_cross_validation() {
  std::mt19937_64 rng(20240601);
  double worst_tv = 0.0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const FiniteStochastic P = test::random_stochastic(rng, n, 0.5);
    const Distribution g = gth_stationary(P);
    const Distribution p = power_iteration(P, Distribution::point_mass(0), 1e-12, 1000000);
    worst_tv = std::max(worst_tv, tv_distance(g, p));
    worst_residual =
        std::max({worst_residual, stationary_residual(P, g), stationary_residual(P, p)});
  }
  return {worst_tv <= 1e-8 && worst_residual <= 1e-10,
          "matrices=200 max_tv=" + fmt(worst_tv) + " max_residual=" + fmt(worst_residual)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Example 1 last-state augmentation gives delta_n for odd n", 1000,
       [] { return from_scenario("example1_failure"); }},
      {2, "Example 1 Lyapunov truncations converge under four augmentations", 5000,
       [] { return from_scenario("example1_lyapunov"); }},
      {3, "Example 2 closed form and the m-step gap", 2000,
       [] { return from_scenario("example2_borovkov"); }},
      {4, "Drift certificate and stationary moment bound", 0, drift_machinery},
      {5, "Monotone birth-death chain with last-state augmentation", 0, monotone_chain},
      {6, "GTH against power iteration on random matrices", 0, solver_cross_validation},
      {7, "Regeneration: decoupling, cycle length, occupation, splitting", 0,
       [] { return from_scenario("regen_coupling"); }},
      {8, "M/M/1 generator truncations", 0, [] { return from_scenario("ctmc_mm1"); }},
      {9, "Example 3 kernel row at 0 and exact halving paths", 0,
       [] { return from_scenario("example3_nostationary"); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    std::string timing = fmt(ms) + " ms";
    if (c.budget_ms > 0) {
      timing += " (budget " + fmt(c.budget_ms) + " ms)";
      if (ms > c.budget_ms) {
        out.pass = false;
        out.detail += " over runtime budget";
      }
    }
    if (!out.pass) ++failures;
    std::printf("[%s] criterion %d: %s | %s | %s\n", out.pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), out.detail.c_str(), timing.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

#include "truncaug/scenario.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "truncaug/augmentation.hpp"
#include "truncaug/catalog.hpp"
#include "truncaug/error.hpp"
#include "truncaug/example3.hpp"
#include "truncaug/regen.hpp"
#include "truncaug/solve.hpp"
#include "truncaug/truncation.hpp"

namespace truncaug {

namespace {

struct Builder {
  ScenarioReport report;
  void check(const std::string& label, bool pass) { report.checks.push_back({label, pass}); }
  void metric(const std::string& key, double value) { report.metrics.emplace_back(key, value); }
};

bool is_point_mass(const Distribution& pi, StateIndex state) {
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const double expected = pi.support()[k] == state ? 1.0 : 0.0;
    if (pi.mass()[k] != expected) return false;
  }
  return pi.at(state) == 1.0;
}

ScenarioReport example1_failure() {
  Builder b;
  const CatalogEntry entry = example1();
  std::size_t checked = 0;
  std::size_t exact = 0;
  double min_tv = 1.0;
  for (std::size_t n = 3; n <= 101; n += 2) {
    const AugmentedMatrix aug =
        augment_last_state(northwest_corner(*entry.chain, interval_set(n)));
    const StationarySet s = stationary_set(aug.matrix);
    ++checked;
    if (s.unique() && is_point_mass(s.extremes.front(), n)) ++exact;
    min_tv = std::min(min_tv, tv_to_analytic(s.extremes.front(), entry));
  }
  b.check("last-state pi_n is exactly delta_n for odd n in 3..101", exact == checked);
  b.metric("odd_n_checked", static_cast<double>(checked));
  b.metric("odd_n_exact_delta", static_cast<double>(exact));
  b.metric("min_tv_to_pi", min_tv);
  return b.report;
}

// Levels e^{theta (i + 3/4)} give the sublevel sets {0, ..., 2i}.
std::vector<double> example1_levels(double theta, std::size_t count) {
  std::vector<double> levels;
  for (std::size_t i = 1; i <= count; ++i) {
    levels.push_back(std::exp(theta * (static_cast<double>(i) + 0.75)));
  }
  return levels;
}

ScenarioReport example1_lyapunov() {
  Builder b;
  const double theta = kExample1Theta;
  const CatalogEntry entry = example1(theta);
  const LyapunovCertificate& cert = *entry.certificate;

  const AugmentedMatrix oracle =
      augment_first_state(northwest_corner(*entry.chain, interval_set(1999)));
  const double oracle_tv = tv_to_analytic(stationary_set(oracle.matrix).extremes.front(), entry);
  b.check("analytic pi agrees with first-state GTH at size 2000", oracle_tv <= 1e-9);
  b.metric("oracle_tv", oracle_tv);

  const std::vector<std::string> kinds = {"first", "last", "uniform", "random"};
  bool all_small = true;
  bool all_decreasing = true;
  bool all_bounded = true;
  double worst_bound = 0.0;
  for (const std::string& kind : kinds) {
    std::vector<double> tvs;
    std::vector<std::size_t> sizes;
    std::size_t point = 0;
    for (double level : example1_levels(theta, 40)) {
      const TruncationSet set = sublevel_set(cert.g, level, 10000);
      const TruncationBlock block = northwest_corner(*entry.chain, set);
      const AugmentedMatrix aug =
          kind == "first"     ? augment_first_state(block)
          : kind == "last"    ? augment_last_state(block)
          : kind == "uniform" ? augment_general(block, uniform_redistribution(block))
                              : augment_general(block, random_redistribution(block, 7 + point));
      const StationarySet s = stationary_set(aug.matrix);
      for (const Distribution& pi : s.extremes) {
        const StationaryBound bound = stationary_bound_check(pi, cert);
        all_bounded = all_bounded && bound.pass;
        worst_bound = std::max(worst_bound, bound.value);
      }
      tvs.push_back(tv_to_analytic(s.extremes.front(), entry));
      sizes.push_back(set.size());
      ++point;
    }
    double tv_at_41 = 0.0;
    bool decreasing = true;
    for (std::size_t k = 0; k < tvs.size(); ++k) {
      if (sizes[k] >= 41) {
        all_small = all_small && tvs[k] <= 1e-3;
        tv_at_41 = std::max(tv_at_41, tvs[k]);
      }
      if (k > 0 && sizes[k] >= 11 && !(tvs[k] < tvs[k - 1])) decreasing = false;
    }
    all_decreasing = all_decreasing && decreasing;
    b.metric(kind + "_max_tv_size_ge_41", tv_at_41);
    b.metric(kind + "_final_tv", tvs.back());
  }
  b.check("TV <= 1e-3 once |A_n| >= 41 for first, last, uniform, random", all_small);
  b.check("TV strictly decreasing along the grid once |A_n| >= 11", all_decreasing);
  b.check("sum pi_n r <= b + 1e-9 for every pi_n", all_bounded);
  b.metric("max_sum_pi_r", worst_bound);
  return b.report;
}

ScenarioReport example2_borovkov() {
  Builder b;
  double worst = 0.0;
  for (std::size_t n : {1, 5, 50}) {
    const Example2 ex = example2(n);
    const Distribution pi = gth_stationary(ex.matrix);
    const double h = 1.0 / static_cast<double>(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double expected = i == 0 ? example2_pi0(n) : h * example2_pi0(n);
      worst = std::max(worst, std::abs(pi.at(i) - expected));
    }
  }
  b.check("GTH matches the closed form to 1e-12 at n = 1, 5, 50", worst <= 1e-12);
  b.metric("max_abs_error", worst);

  const std::size_t m = 10;
  double sup = -1.0;
  std::size_t argsup = 0;
  for (std::size_t n = 1; n <= 10000; ++n) {
    const double gap =
        std::pow(1.0 - 1.0 / static_cast<double>(n + 1), static_cast<double>(m)) - example2_pi0(n);
    if (gap > sup) {
      sup = gap;
      argsup = n;
    }
  }
  // P^m(0, 0) really is (1 - 1/(n+1))^m for m <= n.
  const Example2 big = example2(10000);
  const double p_m = m_step_distribution(big.matrix, Distribution::point_mass(0), m).at(0);
  const double closed = std::pow(1.0 - 1.0 / 10001.0, static_cast<double>(m));
  b.check("m-step mass at 0 matches (1 - 1/(n+1))^m at n = 10^4",
          std::abs(p_m - closed) <= 1e-12);
  b.check("sup over n <= 10^4 of the m = 10 gap is >= 0.49", sup >= 0.49);
  b.metric("sup_gap", sup);
  b.metric("argsup_n", static_cast<double>(argsup));
  return b.report;
}

ScenarioReport example3_nostationary() {
  Builder b;
  b.check("augmented row at 0 is 1/2 delta_1 + 1/2 delta_0", example3::zero_row_is_not_delta0());
  bool exact = true;
  const std::size_t steps = 200;
  for (double x0 : {0.3, 0.7, 0.9}) {
    const example3::Trajectory t = example3::simulate(x0, steps, 7);
    for (std::size_t k = 0; k <= steps; ++k) {
      const example3::Point& p = t.path[k];
      exact = exact && p.mantissa == x0 && p.halvings == static_cast<std::int64_t>(k) &&
              p.value() == std::ldexp(x0, -static_cast<int>(k));
    }
    exact = exact && t.atom_visits == 0;
  }
  b.check("paths from 0.3, 0.7, 0.9 satisfy X_k = x0 2^{-k} exactly", exact);
  const example3::TerminalSummary s = example3::terminal_summary(0.3, 60, 1000, 7);
  b.metric("mean_terminal_from_0.3", s.mean_terminal);
  b.metric("mass_near_zero_from_0.3", s.mass_near_zero);
  return b.report;
}

ScenarioReport regen_coupling() {
  Builder b;
  const double lam = 0.3;
  const CatalogEntry entry = reset_chain(lam);
  const Minorization& m = *entry.minorization;

  std::vector<double> exact;
  double route_gap = 0.0;
  for (std::size_t n : {10, 20, 40}) {
    const TruncationSet set = interval_set(n);
    const AugmentedMatrix aug = augment_last_state(northwest_corner(*entry.chain, set));
    const double p = decoupling_probability_exact(split_augmented(aug, m));
    route_gap = std::max(route_gap, std::abs(p - decoupling_probability_exact(*entry.chain, set, m)));
    exact.push_back(p);
    b.metric("p_decouple_n" + std::to_string(n), p);
  }
  b.check("exact decoupling probability strictly decreasing in n",
          exact[0] > exact[1] && exact[1] > exact[2]);
  b.check("exact decoupling probability < 0.01 at n = 40", exact[2] < 0.01);
  b.check("P_n and untruncated routes agree to 1e-12", route_gap <= 1e-12);

  const AugmentedMatrix aug = augment_last_state(northwest_corner(*entry.chain, interval_set(40)));
  const SplitKernel split = split_kernel(aug.matrix, m);
  double recon = 0.0;
  for (std::size_t i = 0; i < aug.matrix.size(); ++i) {
    for (std::size_t j = 0; j < aug.matrix.size(); ++j) {
      const double rebuilt = lam * m.phi.at(aug.matrix.states()[j]) +
                             (1.0 - lam) * split.residual->at(i, j);
      recon = std::max(recon, std::abs(rebuilt - aug.matrix.at(i, j)));
    }
  }
  b.check("lambda phi + (1 - lambda) H reproduces P_n to 1e-12", recon <= 1e-12);
  b.metric("split_reconstruction_error", recon);

  const RegenerativeEstimate est = simulate_cycles(split_augmented(aug, m), 100000, 7);
  const double tau_z = std::abs(est.tau_mean - 1.0 / lam) / est.tau_stderr;
  b.check("tau_mean within 3 sigma of 1/lambda", tau_z <= 3.0);
  b.metric("tau_mean", est.tau_mean);
  b.metric("tau_z", tau_z);

  // sigma is the estimator's exact standard deviation; the plug-in stderr
  // collapses at states visited only a handful of times.
  const AugmentedSplit asplit = split_augmented(aug, m);
  const Distribution pi = gth_stationary(aug.matrix);
  const std::vector<double> sigma = ratio_estimator_stddev(asplit, pi, est.num_cycles);
  double worst_z = 0.0;
  double worst_plugin_z = 0.0;
  bool within = true;
  for (std::size_t k = 0; k < est.states.size(); ++k) {
    const double diff = std::abs(est.pi_hat.at(est.states[k]) - pi.at(est.states[k]));
    within = within && diff <= 3.0 * sigma[k];
    if (sigma[k] > 0.0) worst_z = std::max(worst_z, diff / sigma[k]);
    if (est.pi_stderr[k] > 0.0) worst_plugin_z = std::max(worst_plugin_z, diff / est.pi_stderr[k]);
  }
  b.check("regenerative pi_hat within 3 sigma of GTH pi", within);
  b.metric("pi_worst_z", worst_z);
  b.metric("pi_worst_plugin_z", worst_plugin_z);
  b.metric("cycles", static_cast<double>(est.num_cycles));
  return b.report;
}

Distribution geometric_on(const TruncationSet& set, double ratio) {
  std::vector<StateIndex> states(set.states().begin(), set.states().end());
  std::vector<double> weights;
  for (StateIndex x : states) weights.push_back(std::pow(ratio, static_cast<double>(x)));
  return Distribution::from_weights(std::move(states), std::move(weights));
}

ScenarioReport ctmc_mm1() {
  Builder b;
  const CatalogEntry entry = mm1_rates(1.0, 2.0);
  const TruncationSet set = interval_set(60);
  const RateBlock block = northwest_corner(*entry.rate_chain, set);
  const std::vector<std::pair<std::string, RateStrategy>> strategies = {
      {"first", FixedStateRateStrategy{0}},
      {"last", FixedStateRateStrategy{60}},
      {"uniform", LinearRateStrategy{Distribution::uniform(
                      std::vector<StateIndex>(set.states().begin(), set.states().end()))}},
      {"fixed30", FixedStateRateStrategy{30}},
      {"geometric", LinearRateStrategy{geometric_on(set, 0.5)}}};
  bool ok_residual = true;
  bool ok_tv = true;
  for (const auto& [name, strategy] : strategies) {
    const RateAugmented aug = augment_rate_block(block, strategy);
    const Distribution pi = ctmc_stationary(aug.matrix);
    const double residual = stationary_residual(aug.matrix, pi);
    const double tv = tv_to_analytic(pi, entry);
    ok_residual = ok_residual && residual <= 1e-10;
    ok_tv = ok_tv && tv <= 1e-6;
    b.metric(name + "_residual", residual);
    b.metric(name + "_tv", tv);
  }
  b.check("||pi Q_n||_inf <= 1e-10 at truncation 60", ok_residual);
  b.check("TV to geometric(1/2) <= 1e-6 at truncation 60", ok_tv);
  return b.report;
}

}  // namespace

bool ScenarioReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.pass; });
}

std::vector<std::string> scenario_names() {
  return {"example1_failure",      "example1_lyapunov", "example2_borovkov",
          "example3_nostationary", "regen_coupling",    "ctmc_mm1"};
}

ScenarioReport run_scenario(const std::string& name) {
  ScenarioReport report;
  if (name == "example1_failure") report = example1_failure();
  else if (name == "example1_lyapunov") report = example1_lyapunov();
  else if (name == "example2_borovkov") report = example2_borovkov();
  else if (name == "example3_nostationary") report = example3_nostationary();
  else if (name == "regen_coupling") report = regen_coupling();
  else if (name == "ctmc_mm1") report = ctmc_mm1();
  else throw Error(ErrorCode::kInvalidArgument, "unknown scenario '" + name + "'");
  report.name = name;
  return report;
}

std::string scenario_json(const ScenarioReport& report) {
  nlohmann::ordered_json j;
  j["scenario"] = report.name;
  j["pass"] = report.pass();
  j["checks"] = nlohmann::ordered_json::object();
  for (const ScenarioCheck& c : report.checks) j["checks"][c.label] = c.pass;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.metrics) j["metrics"][key] = value;
  return j.dump(2);
}

}  // namespace truncaug

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "truncaug/augmentation.hpp"
#include "truncaug/catalog.hpp"
#include "truncaug/error.hpp"
#include "truncaug/example3.hpp"
#include "truncaug/regen.hpp"
#include "truncaug/solve.hpp"

namespace truncaug {
namespace {

TEST(Catalog, KnownCases) {
  const CatalogEntry bd = catalog("birth_death", {{"p", 0.3}});
  EXPECT_NEAR((*bd.analytic_pi)(0), 4.0 / 7.0, 1e-15);

  const CatalogEntry mm1 = catalog("mm1_rates", {{"lam", 1.0}, {"mu", 2.0}});
  for (StateIndex i = 0; i < 20; ++i) {
    EXPECT_NEAR((*mm1.analytic_pi)(i), std::exp2(-static_cast<double>(i + 1)), 1e-15);
  }

  const CatalogEntry reset = catalog("reset_chain");
  EXPECT_GE(find_minorization(augment_last_state(northwest_corner(*reset.chain, interval_set(25)))
                                  .matrix)
                .lambda,
            0.3 - 1e-15);
}

TEST(Catalog, RejectsUnknownNamesParamsAndRanges) {
  EXPECT_THROW(catalog("nope"), Error);
  EXPECT_THROW(catalog("birth_death", {{"q", 0.2}}), Error);
  EXPECT_THROW(catalog("birth_death", {{"p", 0.5}}), Error);
  EXPECT_THROW(catalog("mm1_rates", {{"lam", 2.0}, {"mu", 2.0}}), Error);
  EXPECT_THROW(catalog("reset_chain", {{"lam_floor", 1.0}}), Error);
  EXPECT_THROW(catalog_defaults("nope"), Error);
  for (const std::string& name : catalog_names()) EXPECT_NO_THROW(catalog(name)) << name;
}

TEST(Catalog, ChainsPassValidation) {
  for (const std::string& name : catalog_names()) {
    const CatalogEntry entry = catalog(name);
    if (entry.chain) {
      EXPECT_NO_THROW(validate_chain(*entry.chain, 500)) << name;
    } else {
      for (StateIndex x = 0; x < 500; ++x) EXPECT_NO_THROW(entry.rate_chain->row(x));
    }
  }
}

// Global balance of every closed-form pi on a window: mass sums to one once
// the tail is added, and pi P = pi holds at states only reachable from below
// the window edge.
TEST(Catalog, AnalyticPiIsStationary) {
  const std::size_t size = 500;
  for (const std::string& name : catalog_names()) {
    const CatalogEntry entry = catalog(name);
    if (!entry.analytic_pi) continue;
    const MaterializedReference ref = materialize_analytic(entry, size);
    double total = ref.tail_mass;
    for (StateIndex x = 0; x < size; ++x) total += (*entry.analytic_pi)(x);
    EXPECT_NEAR(total, 1.0, 1e-14) << name;

    std::vector<double> flow(size, 0.0);
    for (StateIndex w = 0; w < size; ++w) {
      const double mass = (*entry.analytic_pi)(w);
      if (entry.chain) {
        for (const Transition& t : entry.chain->row(w).entries()) {
          if (t.target < size) flow[t.target] += mass * t.prob;
        }
      } else {
        for (const RateTransition& t : entry.rate_chain->row(w).entries()) {
          if (t.target < size) flow[t.target] += mass * t.rate;
        }
        flow[w] -= mass * entry.rate_chain->row(w).total_rate();
      }
    }
    for (StateIndex x = 1; x + 3 < size; ++x) {
      const double expected = entry.chain ? (*entry.analytic_pi)(x) : 0.0;
      EXPECT_NEAR(flow[x], expected, 1e-14) << name << " x=" << x;
    }
  }
}

TEST(Example1, KnownCases) {
  const CatalogEntry e1 = example1(0.4);
  const TransitionRow& row0 = e1.chain->row(0);
  ASSERT_EQ(row0.entries().size(), 2u);
  EXPECT_EQ(row0.entries()[0].target, 0u);
  EXPECT_EQ(row0.entries()[0].prob, 0.5);
  EXPECT_EQ(row0.entries()[1].target, 1u);
  EXPECT_NEAR((*e1.analytic_pi)(0), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(example1(0.5), Error);
  EXPECT_THROW(example1(0.0), Error);

  const Distribution oracle = gth_stationary(
      augment_first_state(northwest_corner(*e1.chain, interval_set(1999))).matrix);
  EXPECT_LE(tv_to_analytic(oracle, e1), 1e-9);
}

// Last-state augmentation over {0..n} with n odd puts all mass on n.
TEST(Example1, LastStateAugmentationLosesAllMass) {
  const CatalogEntry e1 = example1(0.4);
  for (std::size_t n = 3; n <= 41; n += 2) {
    const StationarySet s =
        stationary_set(augment_last_state(northwest_corner(*e1.chain, interval_set(n))).matrix);
    ASSERT_TRUE(s.unique());
    EXPECT_EQ(s.extremes[0].at(n), 1.0);
    EXPECT_NEAR(tv_to_analytic(s.extremes[0], e1), 1.0 - (*e1.analytic_pi)(n), 1e-15);
  }
}

TEST(Example2, KnownCases) {
  for (std::size_t n : {1, 4, 50}) {
    const Example2 ex = example2(n);
    const Distribution gth = gth_stationary(ex.matrix);
    EXPECT_LE(tv_distance(gth, ex.pi), 1e-12) << n;
    EXPECT_NEAR(ex.pi.at(0), example2_pi0(n), 1e-15);
  }
  EXPECT_NEAR(example2_pi0(1), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(example2(0), Error);
}

namespace ex3 = example3;

std::map<double, double> as_map(const ex3::AtomicRow& row) {
  std::map<double, double> out;
  for (const ex3::Atom& a : row) out[a.target] += a.prob;
  return out;
}

TEST(Example3, AugmentationMatchesClosedForm) {
  for (double x : {0.0, 0.1, 0.25, 0.5, 0.6, 0.75, 0.99, 1.0}) {
    EXPECT_EQ(as_map(ex3::augmented_row(ex3::original_row, ex3::halving_row, x)),
              as_map(ex3::closed_form_row(x)))
        << x;
  }
  EXPECT_TRUE(ex3::zero_row_is_not_delta0());
  EXPECT_EQ(as_map(ex3::original_row(0.3)), (std::map<double, double>{{1.3, 0.5}, {2.0, 0.5}}));
  EXPECT_EQ(as_map(ex3::original_row(0.8)), (std::map<double, double>{{1.2, 0.5}, {2.0, 0.5}}));
}

TEST(Example3, KnownCases) {
  const ex3::Trajectory t = ex3::simulate(0.7, 3, 1);
  EXPECT_DOUBLE_EQ(t.path[3].value(), 0.0875);
  EXPECT_EQ(t.atom_visits, 0u);

  std::map<double, int> from_one;
  std::map<double, int> from_zero;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    from_one[ex3::simulate(1.0, 1, seed).path[1].value()]++;
    from_zero[ex3::simulate(0.0, 1, seed).path[1].value()]++;
  }
  ASSERT_EQ(from_one.size(), 2u);
  EXPECT_TRUE(from_one.contains(1.0) && from_one.contains(0.5));
  EXPECT_NEAR(from_one[1.0] / 400.0, 0.5, 0.1);
  ASSERT_EQ(from_zero.size(), 2u);
  EXPECT_TRUE(from_zero.contains(0.0) && from_zero.contains(1.0));
  EXPECT_NEAR(from_zero[0.0] / 400.0, 0.5, 0.1);
}

TEST(Example3, InteriorPathsHalveExactly) {
  for (double x0 : {0.3, 0.7, 0.9}) {
    const ex3::Trajectory t = ex3::simulate(x0, 1500, 5);
    for (std::size_t k = 0; k < t.path.size(); ++k) {
      EXPECT_EQ(t.path[k], (ex3::Point{x0, static_cast<std::int64_t>(k)}));
      EXPECT_FALSE(t.path[k].is_zero());
    }
  }
}

TEST(Example3, MassDriftsToZeroWithoutReachingIt) {
  const ex3::TerminalSummary s = ex3::terminal_summary(0.7, 200, 500, 3);
  EXPECT_EQ(s.paths, 500u);
  EXPECT_EQ(s.mass_near_zero, 1.0);
  EXPECT_LT(s.mean_terminal, 1e-50);
  EXPECT_GT(s.mean_terminal, 0.0);
}

}  // namespace
}  // namespace truncaug

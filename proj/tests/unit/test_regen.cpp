#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "truncaug/augmentation.hpp"
#include "truncaug/catalog.hpp"
#include "truncaug/error.hpp"
#include "truncaug/io.hpp"
#include "truncaug/regen.hpp"
#include "truncaug/solve.hpp"

namespace truncaug {
namespace {

FiniteStochastic two_state() {
  return FiniteStochastic({0, 1}, {{{0, 0.5}, {1, 0.5}}, {{0, 0.25}, {1, 0.75}}});
}

AugmentedMatrix reset_truncation(std::size_t n) {
  return augment_last_state(northwest_corner(*reset_chain(0.3).chain, interval_set(n)));
}

TEST(Minorization, KnownCases) {
  const Minorization m = find_minorization(two_state());
  EXPECT_DOUBLE_EQ(m.lambda, 0.75);
  EXPECT_NEAR(m.phi.at(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.phi.at(1), 2.0 / 3.0, 1e-15);

  const FiniteStochastic id({0, 1}, {{{0, 1.0}}, {{1, 1.0}}});
  try {
    find_minorization(id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotStronglyUniformlyRecurrent);
  }

  EXPECT_GE(find_minorization(reset_truncation(30).matrix).lambda, 0.3 - 1e-15);
}

TEST(Minorization, RestrictionConditionsPhi) {
  const Minorization m = find_minorization(reset_truncation(10).matrix, TruncationSet({0, 1}));
  EXPECT_NEAR(m.lambda, 0.2, 1e-15);
  EXPECT_NEAR(m.phi.at(0), 0.5, 1e-15);
  EXPECT_EQ(m.phi.at(2), 0.0);
}

TEST(SplitKernel, KnownCases) {
  const SplitKernel s = split_kernel(two_state(), find_minorization(two_state()));
  ASSERT_FALSE(s.degenerate());
  EXPECT_NEAR(s.residual->at(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(s.residual->at(1, 1), 1.0, 1e-15);
  EXPECT_EQ(s.residual->at(0, 1), 0.0);

  const FiniteStochastic same({0, 1}, {{{0, 0.4}, {1, 0.6}}, {{0, 0.4}, {1, 0.6}}});
  EXPECT_TRUE(split_kernel(same, find_minorization(same)).degenerate());

  EXPECT_THROW(split_kernel(two_state(), Minorization{0.9, Distribution::point_mass(0)}), Error);
}

TEST(SplitKernel, ReconstructsRandomPositiveMatrices) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteStochastic P = test::random_stochastic(rng, 5, 0.0);
    const Minorization m = find_minorization(P);
    const SplitKernel s = split_kernel(P, m);
    ASSERT_FALSE(s.degenerate());
    for (std::size_t i = 0; i < 5; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        total += s.residual->at(i, j);
        const double rebuilt = m.lambda * m.phi.at(j) + (1 - m.lambda) * s.residual->at(i, j);
        EXPECT_NEAR(rebuilt, P.at(i, j), 1e-12);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(SplitAugmented, KnownCases) {
  const CountableChain ring("ring", [](StateIndex x) -> std::vector<Transition> {
    return {{(x + 1) % 3, 0.5}, {0, 0.25}, {1, 0.25}};
  });
  const AugmentedMatrix closed = augment_first_state(northwest_corner(ring, interval_set(2)));
  const Minorization mc = find_minorization(closed.matrix);
  const AugmentedSplit sc = split_augmented(closed, mc);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(sc.r[i], 0.0);
    EXPECT_NEAR(sc.q[i], 1.0 - mc.lambda, 1e-15);
  }

  const AugmentedMatrix aug = reset_truncation(20);
  const AugmentedSplit split = split_augmented(aug, *reset_chain(0.3).minorization);
  for (std::size_t i = 0; i < aug.base.size(); ++i) EXPECT_EQ(split.r[i], aug.base.exit[i]);

  const Distribution nu = Distribution::from_weights({0, 3, 7}, {1, 2, 3});
  const AugmentedMatrix lin = augment_linear(
      northwest_corner(*reset_chain(0.3).chain, interval_set(12)), nu);
  const AugmentedSplit ls = split_augmented(lin, *reset_chain(0.3).minorization);
  for (std::size_t i = 0; i < lin.base.size(); ++i) {
    if (ls.r[i] == 0.0) continue;
    const SparseRow& law = *ls.redistribution[i];
    ASSERT_EQ(law.size(), 3u);
    EXPECT_DOUBLE_EQ(law[1].value, nu.at(3));
  }
}

TEST(SplitAugmented, ThreeWayDecompositionReconstructsPn) {
  const Minorization m = *reset_chain(0.3).minorization;
  std::uint64_t seed = 1;
  for (std::size_t n : {5, 12, 30}) {
    const TruncationBlock block = northwest_corner(*reset_chain(0.3).chain, interval_set(n));
    for (const AugmentedMatrix& aug :
         {augment_last_state(block), augment_general(block, random_redistribution(block, seed++))}) {
      const AugmentedSplit s = split_augmented(aug, m);
      for (std::size_t i = 0; i <= n; ++i) {
        EXPECT_NEAR(m.lambda + s.q[i] + s.r[i], 1.0, 1e-12);
        for (std::size_t j = 0; j <= n; ++j) {
          double v = m.lambda * m.phi.at(j);
          for (const SparseEntry& e : s.stay[i]) {
            if (e.col == j) v += e.value;
          }
          if (s.redistribution[i]) {
            for (const SparseEntry& e : *s.redistribution[i]) {
              if (e.col == j) v += s.r[i] * e.value;
            }
          }
          EXPECT_NEAR(v, aug.matrix.at(i, j), 1e-12);
        }
      }
    }
  }
}

TEST(SplitAugmented, PhiOutsideTheSetIsRejected) {
  const AugmentedMatrix aug = augment_last_state(northwest_corner(*example1().chain, interval_set(3)));
  EXPECT_THROW(split_augmented(aug, Minorization{0.1, Distribution::point_mass(9)}), Error);
}

TEST(SimulateCycles, DegenerateChainHasUnitCycles) {
  const FiniteStochastic same({0, 1}, {{{0, 0.4}, {1, 0.6}}, {{0, 0.4}, {1, 0.6}}});
  const SplitKernel s = split_kernel(same, find_minorization(same));
  const RegenerativeEstimate est = simulate_cycles(s, 2000, 3);
  EXPECT_EQ(est.max_cycle_length, 1u);
  EXPECT_EQ(est.tau_mean, 1.0);
  EXPECT_NEAR(est.pi_hat.at(0), 0.4, 0.05);
}

TEST(SimulateCycles, CycleLengthIsGeometric) {
  const AugmentedMatrix aug = reset_truncation(40);
  const AugmentedSplit split = split_augmented(aug, *reset_chain(0.3).minorization);
  const RegenerativeEstimate est = simulate_cycles(split, 100000, 7);
  EXPECT_LE(std::abs(est.tau_mean - 1.0 / 0.3), 3.0 * est.tau_stderr);
  // Geometric(0.3) standard deviation of the mean.
  EXPECT_NEAR(est.tau_stderr, std::sqrt(0.7) / 0.3 / std::sqrt(100000.0), 2e-4);
}

TEST(SimulateCycles, BitwiseReproducible) {
  const AugmentedSplit split =
      split_augmented(reset_truncation(20), *reset_chain(0.3).minorization);
  const RegenerativeEstimate a = simulate_cycles(split, 5000, 42);
  const RegenerativeEstimate b = simulate_cycles(split, 5000, 42);
  EXPECT_EQ(a.pi_hat, b.pi_hat);
  EXPECT_EQ(a.occupation_stderr, b.occupation_stderr);
  EXPECT_NE(simulate_cycles(split, 5000, 43).pi_hat, a.pi_hat);
}

TEST(SimulateCycles, PiHatMatchesGthWithinSimultaneousCis) {
  const AugmentedMatrix aug = reset_truncation(20);
  const AugmentedSplit split = split_augmented(aug, *reset_chain(0.3).minorization);
  const Distribution pi = gth_stationary(aug.matrix);
  const RegenerativeEstimate est = simulate_cycles(split, 100000, 7);
  const std::vector<double> sigma = ratio_estimator_stddev(split, pi, est.num_cycles);
  for (std::size_t k = 0; k < est.states.size(); ++k) {
    EXPECT_LE(std::abs(est.pi_hat.at(k) - pi.at(k)), 3.0 * sigma[k]) << k;
  }
}

TEST(SimulateCycles, UntruncatedSplitKernelAgreesWithGth) {
  std::mt19937_64 rng(8);
  const FiniteStochastic P = test::random_stochastic(rng, 5, 0.0);
  const SplitKernel s = split_kernel(P, find_minorization(P));
  const Distribution pi = gth_stationary(P);
  const RegenerativeEstimate est = simulate_cycles(s, 50000, 1);
  const std::vector<double> sigma = ratio_estimator_stddev(s, pi, est.num_cycles);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_LE(std::abs(est.pi_hat.at(k) - pi.at(k)), 3.0 * sigma[k]);
  }
}

// Exact sigma against the spread of independent replications.
TEST(RatioEstimatorStddev, MatchesReplicationSpread) {
  const AugmentedMatrix aug = reset_truncation(10);
  const AugmentedSplit split = split_augmented(aug, *reset_chain(0.3).minorization);
  const Distribution pi = gth_stationary(aug.matrix);
  const std::size_t cycles = 1000;
  const std::size_t reps = 300;
  const std::vector<double> sigma = ratio_estimator_stddev(split, pi, cycles);
  std::vector<double> sq(11, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    const RegenerativeEstimate est = simulate_cycles(split, cycles, 500 + r);
    for (std::size_t k = 0; k < 11; ++k) {
      const double d = est.pi_hat.at(k) - pi.at(k);
      sq[k] += d * d;
    }
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const double rmse = std::sqrt(sq[k] / static_cast<double>(reps));
    EXPECT_NEAR(rmse / sigma[k], 1.0, 0.15) << k;
  }
}

TEST(Decoupling, ExitFreeTruncationNeverDecouples) {
  const FiniteStochastic P = two_state();
  const CountableChain chain("two", [](StateIndex x) -> std::vector<Transition> {
    return x == 0 ? std::vector<Transition>{{0, 0.5}, {1, 0.5}}
                  : std::vector<Transition>{{0, 0.25}, {1, 0.75}};
  });
  const AugmentedMatrix aug = augment_first_state(northwest_corner(chain, interval_set(1)));
  const AugmentedSplit split = split_augmented(aug, find_minorization(P));
  const DecouplingEstimate mc = coupled_decoupling_prob(split, 1000, 1);
  EXPECT_EQ(mc.p_hat, 0.0);
  EXPECT_EQ(decoupling_probability_exact(split), 0.0);
}

TEST(Decoupling, ExactDecreasingAndRoutesAgree) {
  const CatalogEntry entry = reset_chain(0.3);
  double previous = 1.0;
  for (std::size_t n : {5, 10, 20, 40}) {
    const TruncationSet set = interval_set(n);
    const AugmentedMatrix aug = augment_last_state(northwest_corner(*entry.chain, set));
    const double from_pn = decoupling_probability_exact(split_augmented(aug, *entry.minorization));
    const double from_p = decoupling_probability_exact(*entry.chain, set, *entry.minorization);
    EXPECT_NEAR(from_pn, from_p, 1e-12);
    EXPECT_LT(from_pn, previous);
    previous = from_pn;
  }
  EXPECT_LT(previous, 0.01);
}

TEST(Decoupling, RoutesAgreeAcrossAugmentations) {
  const CatalogEntry entry = reset_chain(0.2, 0.6);
  const TruncationSet set = interval_set(15);
  const TruncationBlock block = northwest_corner(*entry.chain, set);
  const double from_p = decoupling_probability_exact(*entry.chain, set, *entry.minorization);
  for (const AugmentedMatrix& aug :
       {augment_first_state(block), augment_last_state(block),
        augment_general(block, random_redistribution(block, 3))}) {
    EXPECT_NEAR(decoupling_probability_exact(split_augmented(aug, *entry.minorization)), from_p,
                1e-12);
  }
}

TEST(Decoupling, MonteCarloCoversExact) {
  const CatalogEntry entry = reset_chain(0.3);
  const AugmentedSplit split = split_augmented(reset_truncation(4), *entry.minorization);
  const double exact = decoupling_probability_exact(split);
  const DecouplingEstimate mc = coupled_decoupling_prob(split, 100000, 11);
  EXPECT_GT(exact, 0.001);
  EXPECT_LE(std::abs(mc.p_hat - exact), mc.ci);
}

TEST(Decoupling, LambdaNearOneBound) {
  const CatalogEntry entry = reset_chain(0.95);
  const AugmentedMatrix aug = augment_last_state(northwest_corner(*entry.chain, interval_set(3)));
  const AugmentedSplit s = split_augmented(aug, *entry.minorization);
  EXPECT_LE(decoupling_probability_exact(s), 1.0 - 0.95);
  EXPECT_LE(coupled_decoupling_prob(s, 20000, 2).p_hat, 1.0 - 0.95);
}

TEST(SimulationCsv, Layout) {
  const AugmentedSplit split = split_augmented(reset_truncation(2), *reset_chain(0.3).minorization);
  const RegenerativeEstimate est = simulate_cycles(split, 100, 1);
  std::stringstream ss;
  write_simulation_csv(ss, est, 0.5, 0.1);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("state,occupation_mean,occupation_ci\n0,", 0), 0u);
  EXPECT_NE(text.find("\nscalar,value\ntau_mean,"), std::string::npos);
  EXPECT_NE(text.find("p_decouple,0.5\np_ci,0.1\n"), std::string::npos);
}

}  // namespace
}  // namespace truncaug

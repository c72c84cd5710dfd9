#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "truncaug/augmentation.hpp"
#include "truncaug/countable_chain.hpp"
#include "truncaug/distribution.hpp"
#include "truncaug/finite_matrix.hpp"
#include "truncaug/truncation.hpp"

namespace truncaug {

/// P(x, y) >= lambda phi(y) for every row x.
struct Minorization {
  double lambda;
  Distribution phi;
};

/// Column-minimum minorization: lambda = sum_y min_x P(x, y). With a
/// restriction A, phi is conditioned on A and lambda scaled by phi(A).
/// Throws kNotStronglyUniformlyRecurrent when lambda is 0.
Minorization find_minorization(const FiniteStochastic& P,
                               const std::optional<TruncationSet>& restriction = {});

/// Splitting P = lambda phi + (1 - lambda) H.
struct SplitKernel {
  Minorization minorization;
  /// Residual kernel H; absent when lambda = 1 (all rows equal phi).
  std::optional<FiniteStochastic> residual;
  /// The states of P (H's states when present).
  std::vector<StateIndex> states;

  bool degenerate() const { return !residual.has_value(); }
};

/// Throws kInvalidMinorization when some H entry falls below -1e-12.
SplitKernel split_kernel(const FiniteStochastic& P, const Minorization& m);

/// P_n(x, .) = lambda phi + q_n(x) H_n(x, .) + r_n(x) R_n(x, .), where the
/// H-branch is H(x, .) conditioned on A, q_n(x) = P(x, A) - lambda and
/// r_n(x) = P(x, A^c).
struct AugmentedSplit {
  Minorization minorization;
  std::vector<StateIndex> states;
  std::vector<double> q;
  std::vector<double> r;
  /// Unnormalized H-branch rows: P(x, y) - lambda phi(y) on A (mass q(x)).
  std::vector<SparseRow> stay;
  /// R_n(x, .) in local coordinates for rows with r(x) > 0.
  std::vector<std::optional<SparseRow>> redistribution;
};

/// Throws kInvalidMinorization when q_n(x) < -1e-12 (phi not inside A or
/// lambda too large for the corner rows).
AugmentedSplit split_augmented(const AugmentedMatrix& augmented,
                               const Minorization& m);

struct RegenerativeEstimate {
  std::vector<StateIndex> states;
  /// E_phi sum_{j < tau} 1{X_j = y} per state, with standard errors.
  std::vector<double> occupation_mean;
  std::vector<double> occupation_stderr;
  Distribution pi_hat = Distribution::point_mass(0);
  /// Delta-method standard errors of the ratio estimator pi_hat.
  std::vector<double> pi_stderr;
  double tau_mean = 0.0;
  double tau_stderr = 0.0;
  std::size_t num_cycles = 0;
  std::size_t max_cycle_length = 0;
  /// Cycles in which the R-branch fired before regeneration.
  std::size_t decoupled_cycles = 0;
};

/// Regenerative simulation of the split chain: from x, with probability
/// lambda regenerate from phi (the cycle ends), else move by H. Cycle c uses
/// substream (seed, c).
RegenerativeEstimate simulate_cycles(const SplitKernel& split, std::size_t num_cycles,
                                     std::uint64_t seed);
/// Same for P_n with the three-way branch of its augmented split.
RegenerativeEstimate simulate_cycles(const AugmentedSplit& split,
                                     std::size_t num_cycles, std::uint64_t seed);

/// Exact standard deviation of pi_hat(y) for a run of num_cycles cycles,
/// from the second moment of sum_{j < tau} (1{X_j = y} - pi(y)) under the
/// split dynamics. Unlike RegenerativeEstimate::pi_stderr it does not shrink
/// with the estimate at rarely visited states.
std::vector<double> ratio_estimator_stddev(const SplitKernel& split, const Distribution& pi,
                                           std::size_t num_cycles);
std::vector<double> ratio_estimator_stddev(const AugmentedSplit& split,
                                           const Distribution& pi, std::size_t num_cycles);

struct DecouplingEstimate {
  double p_hat;
  double std_error;
  /// Half-width of the z-sigma interval.
  double ci;
};

/// Monte Carlo P_phi(tau > beta_n): fraction of cycles where the R-branch
/// fires before regeneration.
DecouplingEstimate coupled_decoupling_prob(const AugmentedSplit& split,
                                           std::size_t num_cycles, std::uint64_t seed,
                                           double z = 3.0);

/// Exact P_phi(tau > beta_n) under P_n dynamics by the absorbing-chain solve
/// u = r + K u, K(x, y) = q_n(x) H_n(x, y).
double decoupling_probability_exact(const AugmentedSplit& split);

/// Exact P_phi(tau > beta_n) under the untruncated chain: before decoupling
/// the path stays in A, moving with P(x, y) - lambda phi(y).
double decoupling_probability_exact(const CountableChain& chain,
                                    const TruncationSet& set, const Minorization& m);

}  // namespace truncaug

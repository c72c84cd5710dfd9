#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "truncaug/distribution.hpp"
#include "truncaug/finite_matrix.hpp"
#include "truncaug/truncation.hpp"

namespace truncaug {

enum class AugmentationKind {
  kGeneral,
  kLinear,
  kFixedLinear,
  kFixedState,
  kFirstState,
  kLastState,
};

std::string_view to_string(AugmentationKind kind);

/// Stochastic matrix P_n dominating a northwest-corner block B entrywise.
///
/// Every augmentation here is B(x, .) + exit(x) * R(x, .) for a per-row
/// redistribution law R(x); `redistribution` keeps those laws (in local
/// coordinates) for rows with positive exit mass.
struct AugmentedMatrix {
  TruncationBlock base;
  FiniteStochastic matrix;
  AugmentationKind kind;
  std::vector<std::optional<SparseRow>> redistribution;
};

/// P_n(x, y) = B(x, y) + exit(x) nu(y). Throws kSupportMismatch unless
/// supp(nu) is inside the block's set.
AugmentedMatrix augment_linear(const TruncationBlock& block, const Distribution& nu);

/// Linear augmentation with nu = delta_y. Throws kSupportMismatch if y is not
/// in the set.
AugmentedMatrix augment_fixed_state(const TruncationBlock& block, StateIndex y);
AugmentedMatrix augment_first_state(const TruncationBlock& block);
AugmentedMatrix augment_last_state(const TruncationBlock& block);

/// Fixed-linear augmentation: nu_n = nu restricted to A and renormalized.
/// `nu` is a (possibly unnormalized) nonnegative weight on all states.
/// Throws kInvalidArgument if nu puts no weight on A.
AugmentedMatrix augment_fixed_linear(const TruncationBlock& block,
                                     const StateFunction& nu);

/// Per-row redistribution laws for a general augmentation. Rows whose exit
/// mass is zero may be left empty.
using RedistributionRows = std::vector<std::optional<Distribution>>;

/// P_n(x, .) = B(x, .) + exit(x) R(x)(.). Throws kMissingRow when a leaking
/// row has no law and kSupportMismatch when a law charges a state outside A.
AugmentedMatrix augment_general(const TruncationBlock& block,
                                const RedistributionRows& laws);

/// Uniform spread of each row's exit mass over A.
RedistributionRows uniform_redistribution(const TruncationBlock& block);
/// Seeded random laws (Dirichlet(1) weights on a random subset of A) for
/// every leaking row; deterministic in the seed.
RedistributionRows random_redistribution(const TruncationBlock& block,
                                         std::uint64_t seed);

/// Rate-matrix augmentation strategies.
struct LinearRateStrategy {
  Distribution nu;
};
struct FixedStateRateStrategy {
  StateIndex state;
};
using RateStrategy = std::variant<LinearRateStrategy, FixedStateRateStrategy>;

struct RateAugmented {
  RateBlock base;
  FiniteRate matrix;
};

/// Q_n(x, y) = Q(x, y) + eps(x) nu(y) for y != x; mass nu(x) aimed at the
/// diagonal adds no transition. Throws kSupportMismatch when nu leaves A.
RateAugmented augment_rate_block(const RateBlock& block,
                                 const RateStrategy& strategy);

}  // namespace truncaug

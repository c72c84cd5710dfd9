#include "truncaug/augmentation.hpp"

#include <string>

#include "truncaug/error.hpp"
#include "truncaug/rng.hpp"

namespace truncaug {

std::string_view to_string(AugmentationKind kind) {
  switch (kind) {
    case AugmentationKind::kGeneral: return "general";
    case AugmentationKind::kLinear: return "linear";
    case AugmentationKind::kFixedLinear: return "fixed-linear";
    case AugmentationKind::kFixedState: return "fixed-state";
    case AugmentationKind::kFirstState: return "first-state";
    case AugmentationKind::kLastState: return "last-state";
  }
  return "unknown";
}

namespace {

SparseRow to_local_row(const TruncationSet& set, const Distribution& law) {
  SparseRow row;
  for (std::size_t k = 0; k < law.size(); ++k) {
    const double mass = law.mass()[k];
    if (mass == 0.0) continue;
    auto j = set.local_index(law.support()[k]);
    if (!j) {
      throw Error(ErrorCode::kSupportMismatch,
                  "redistribution law charges state " +
                      std::to_string(law.support()[k]) +
                      " outside the truncation set");
    }
    row.push_back({*j, mass});
  }
  return row;
}

AugmentedMatrix assemble(const TruncationBlock& block, AugmentationKind kind,
                         std::vector<std::optional<SparseRow>> laws) {
  std::vector<SparseRow> rows(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    rows[i] = block.rows[i];
    if (block.exit[i] > 0.0) {
      if (!laws[i]) {
        throw Error(ErrorCode::kMissingRow,
                    "no redistribution law for leaking state " +
                        std::to_string(block.set.states()[i]));
      }
      for (const SparseEntry& e : *laws[i]) {
        rows[i].push_back({e.col, block.exit[i] * e.value});
      }
    } else {
      laws[i].reset();
    }
  }
  FiniteStochastic matrix({block.set.states().begin(), block.set.states().end()},
                          std::move(rows));
  for (std::size_t i = 0; i < block.size(); ++i) {
    for (const SparseEntry& e : block.rows[i]) {
      if (matrix.at(i, e.col) < e.value) {
        throw Error(ErrorCode::kDominanceViolation,
                    "augmented entry below the northwest corner");
      }
    }
  }
  return AugmentedMatrix{block, std::move(matrix), kind, std::move(laws)};
}

}  // namespace

AugmentedMatrix augment_linear(const TruncationBlock& block, const Distribution& nu) {
  const SparseRow local = to_local_row(block.set, nu);
  std::vector<std::optional<SparseRow>> laws(block.size(), local);
  return assemble(block, AugmentationKind::kLinear, std::move(laws));
}

AugmentedMatrix augment_fixed_state(const TruncationBlock& block, StateIndex y) {
  if (!block.set.contains(y)) {
    throw Error(ErrorCode::kSupportMismatch,
                "fixed state " + std::to_string(y) + " is outside the set");
  }
  AugmentedMatrix out = augment_linear(block, Distribution::point_mass(y));
  out.kind = AugmentationKind::kFixedState;
  return out;
}

AugmentedMatrix augment_first_state(const TruncationBlock& block) {
  AugmentedMatrix out = augment_fixed_state(block, block.set.min());
  out.kind = AugmentationKind::kFirstState;
  return out;
}

AugmentedMatrix augment_last_state(const TruncationBlock& block) {
  AugmentedMatrix out = augment_fixed_state(block, block.set.max());
  out.kind = AugmentationKind::kLastState;
  return out;
}

AugmentedMatrix augment_fixed_linear(const TruncationBlock& block,
                                     const StateFunction& nu) {
  std::vector<StateIndex> states(block.set.states().begin(),
                                 block.set.states().end());
  std::vector<double> weights;
  weights.reserve(states.size());
  double total = 0.0;
  for (StateIndex x : states) {
    const double w = nu(x);
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "nu must be nonnegative");
    }
    weights.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "nu puts no mass on the truncation set");
  }
  AugmentedMatrix out = augment_linear(
      block, Distribution::from_weights(std::move(states), std::move(weights)));
  out.kind = AugmentationKind::kFixedLinear;
  return out;
}

AugmentedMatrix augment_general(const TruncationBlock& block,
                                const RedistributionRows& laws) {
  if (laws.size() != block.size()) {
    throw Error(ErrorCode::kMissingRow, "one redistribution slot per state needed");
  }
  std::vector<std::optional<SparseRow>> local(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (laws[i]) local[i] = to_local_row(block.set, *laws[i]);
  }
  return assemble(block, AugmentationKind::kGeneral, std::move(local));
}

RedistributionRows uniform_redistribution(const TruncationBlock& block) {
  const Distribution uniform = Distribution::uniform(
      {block.set.states().begin(), block.set.states().end()});
  RedistributionRows laws(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (block.exit[i] > 0.0) laws[i] = uniform;
  }
  return laws;
}

RedistributionRows random_redistribution(const TruncationBlock& block,
                                         std::uint64_t seed) {
  std::mt19937_64 engine = substream(seed, 0);
  RedistributionRows laws(block.size());
  const std::vector<StateIndex> states(block.set.states().begin(),
                                       block.set.states().end());
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (block.exit[i] <= 0.0) continue;
    std::vector<double> weights(states.size(), 0.0);
    bool any = false;
    for (double& w : weights) {
      if (uniform01(engine) < 0.5) {
        w = exponential1(engine);
        any = any || w > 0.0;
      }
    }
    if (!any) {
      weights[static_cast<std::size_t>(engine() % states.size())] = 1.0;
    }
    laws[i] = Distribution::from_weights(states, std::move(weights));
  }
  return laws;
}

RateAugmented augment_rate_block(const RateBlock& block,
                                 const RateStrategy& strategy) {
  const Distribution nu = std::visit(
      [](const auto& s) -> Distribution {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LinearRateStrategy>) {
          return s.nu;
        } else {
          return Distribution::point_mass(s.state);
        }
      },
      strategy);
  const SparseRow local = to_local_row(block.set, nu);
  std::vector<SparseRow> rows(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    rows[i] = block.off_diagonal[i];
    if (block.exit_rate[i] <= 0.0) continue;
    for (const SparseEntry& e : local) {
      if (e.col == i) continue;  // self-directed mass adds no transition
      rows[i].push_back({e.col, block.exit_rate[i] * e.value});
    }
  }
  FiniteRate matrix({block.set.states().begin(), block.set.states().end()},
                    std::move(rows));
  return RateAugmented{block, std::move(matrix)};
}

}  // namespace truncaug

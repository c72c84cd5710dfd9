#pragma once

#include <optional>
#include <span>
#include <vector>

#include "truncaug/countable_chain.hpp"
#include "truncaug/finite_matrix.hpp"
#include "truncaug/types.hpp"

namespace truncaug {

/// Finite truncation set A: a nonempty strictly increasing list of states.
class TruncationSet {
 public:
  explicit TruncationSet(std::vector<StateIndex> states);

  std::span<const StateIndex> states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  bool contains(StateIndex x) const { return local_index(x).has_value(); }
  std::optional<std::size_t> local_index(StateIndex x) const;
  StateIndex min() const { return states_.front(); }
  StateIndex max() const { return states_.back(); }

  bool operator==(const TruncationSet&) const = default;

 private:
  std::vector<StateIndex> states_;
};

/// {x < window : g(x) <= level}. Throws kEmptySet when nothing qualifies and
/// kWindowSuspect when g(window - 1) <= level.
TruncationSet sublevel_set(const StateFunction& g, double level,
                           std::size_t window);

/// Smallest g-ordered prefix of 0..window-1 of length >= k that is closed
/// under ties at the boundary value, so max over the set of g is at most the
/// min of g over the rest of the window.
TruncationSet g_ordered_prefix(const StateFunction& g, std::size_t k,
                               std::size_t window);

/// {0, ..., n}.
TruncationSet interval_set(std::size_t n);

/// Northwest-corner block B = P restricted to A, with exit masses
/// exit(x) = 1 - sum_{y in A} P(x, y).
struct TruncationBlock {
  TruncationSet set;
  /// Rows of B in local coordinates (exact zeros not stored).
  std::vector<SparseRow> rows;
  std::vector<double> exit;

  std::size_t size() const { return set.size(); }
  double at(std::size_t i, std::size_t j) const;
};

TruncationBlock northwest_corner(const CountableChain& chain,
                                 const TruncationSet& set);

/// Rate analogue: off-diagonal rates inside A plus exit rates
/// eps(x) = sum_{y not in A} Q(x, y).
struct RateBlock {
  TruncationSet set;
  std::vector<SparseRow> off_diagonal;
  std::vector<double> exit_rate;

  std::size_t size() const { return set.size(); }
};

RateBlock northwest_corner(const CountableRateChain& chain,
                           const TruncationSet& set);

}  // namespace truncaug

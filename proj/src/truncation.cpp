#include "truncaug/truncation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "truncaug/error.hpp"

namespace truncaug {

TruncationSet::TruncationSet(std::vector<StateIndex> states)
    : states_(std::move(states)) {
  if (states_.empty()) {
    throw Error(ErrorCode::kEmptySet, "truncation set is empty");
  }
  for (std::size_t i = 1; i < states_.size(); ++i) {
    if (states_[i] <= states_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "truncation set must be strictly increasing");
    }
  }
}

std::optional<std::size_t> TruncationSet::local_index(StateIndex x) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), x);
  if (it == states_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

TruncationSet sublevel_set(const StateFunction& g, double level,
                           std::size_t window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  std::vector<StateIndex> states;
  for (StateIndex x = 0; x < window; ++x) {
    if (g(x) <= level) states.push_back(x);
  }
  if (states.empty()) {
    throw Error(ErrorCode::kEmptySet,
                "no state below level " + std::to_string(level));
  }
  if (g(window - 1) <= level) {
    throw Error(ErrorCode::kWindowSuspect,
                "g(window - 1) <= level; the scan window may cut the sublevel set");
  }
  return TruncationSet(std::move(states));
}

TruncationSet g_ordered_prefix(const StateFunction& g, std::size_t k,
                               std::size_t window) {
  if (k < 1 || k > window) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= k <= window");
  }
  std::vector<double> values(window);
  for (StateIndex x = 0; x < window; ++x) values[x] = g(x);
  std::vector<StateIndex> order(window);
  std::iota(order.begin(), order.end(), StateIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](StateIndex a, StateIndex b) {
    return values[a] < values[b];
  });
  const double boundary = values[order[k - 1]];
  std::size_t length = k;
  while (length < window && values[order[length]] <= boundary) ++length;

  std::vector<StateIndex> states(order.begin(),
                                 order.begin() + static_cast<std::ptrdiff_t>(length));
  std::sort(states.begin(), states.end());
  // A prefix that swallows the whole window is the all-ties case and is
  // returned as is; otherwise touching the window edge is suspicious.
  if (length < window && states.back() == window - 1) {
    throw Error(ErrorCode::kWindowSuspect,
                "g-ordered prefix reaches the edge of the scan window");
  }
  return TruncationSet(std::move(states));
}

TruncationSet interval_set(std::size_t n) {
  std::vector<StateIndex> states(n + 1);
  std::iota(states.begin(), states.end(), StateIndex{0});
  return TruncationSet(std::move(states));
}

double TruncationBlock::at(std::size_t i, std::size_t j) const {
  for (const SparseEntry& e : rows[i]) {
    if (e.col == j) return e.value;
  }
  return 0.0;
}

TruncationBlock northwest_corner(const CountableChain& chain,
                                 const TruncationSet& set) {
  TruncationBlock block{set, std::vector<SparseRow>(set.size()),
                        std::vector<double>(set.size(), 0.0)};
  for (std::size_t i = 0; i < set.size(); ++i) {
    const TransitionRow& row = chain.row(set.states()[i]);
    double inside = 0.0;
    bool leaks = false;
    for (const Transition& t : row.entries()) {
      if (auto j = set.local_index(t.target)) {
        block.rows[i].push_back({*j, t.prob});
        inside += t.prob;
      } else {
        leaks = true;
      }
    }
    // 1 - in-set mass rather than a sum over the complement. Rows that never
    // leave A get an exact zero so no spurious support edges appear later.
    block.exit[i] = leaks ? std::max(0.0, 1.0 - inside) : 0.0;
  }
  return block;
}

RateBlock northwest_corner(const CountableRateChain& chain,
                           const TruncationSet& set) {
  RateBlock block{set, std::vector<SparseRow>(set.size()),
                  std::vector<double>(set.size(), 0.0)};
  for (std::size_t i = 0; i < set.size(); ++i) {
    const RateRow& row = chain.row(set.states()[i]);
    for (const RateTransition& t : row.entries()) {
      if (auto j = set.local_index(t.target)) {
        block.off_diagonal[i].push_back({*j, t.rate});
      } else {
        block.exit_rate[i] += t.rate;
      }
    }
  }
  return block;
}

}  // namespace truncaug

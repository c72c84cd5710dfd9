#include "truncaug/countable_chain.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "truncaug/error.hpp"

namespace truncaug {

TransitionRow TransitionRow::from_entries(std::vector<Transition> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Transition& a, const Transition& b) {
              return a.target < b.target;
            });
  TransitionRow row;
  row.entries_.reserve(entries.size());
  for (const Transition& e : entries) {
    if (!row.entries_.empty() && row.entries_.back().target == e.target) {
      row.entries_.back().prob += e.prob;
    } else {
      row.entries_.push_back(e);
    }
  }
  std::erase_if(row.entries_, [](const Transition& e) { return e.prob == 0.0; });
  return row;
}

double TransitionRow::total() const {
  double total = 0.0;
  for (const Transition& e : entries_) total += e.prob;
  return total;
}

double TransitionRow::prob(StateIndex target) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), target,
      [](const Transition& e, StateIndex t) { return e.target < t; });
  if (it == entries_.end() || it->target != target) return 0.0;
  return it->prob;
}

namespace {

std::optional<RowDefect> row_defect(StateIndex x, const TransitionRow& row) {
  for (const Transition& e : row.entries()) {
    if (!std::isfinite(e.prob) || e.prob < 0.0) {
      return RowDefect{x, e.prob, "negative or non-finite entry"};
    }
  }
  const double defect = 1.0 - row.total();
  if (std::abs(defect) > kRowTolerance) {
    return RowDefect{x, defect, "row mass differs from 1"};
  }
  return std::nullopt;
}

template <typename Row>
struct RowMemo {
  std::shared_mutex mutex;
  std::unordered_map<StateIndex, Row> rows;

  template <typename Make>
  const Row& get(StateIndex x, Make&& make) {
    {
      std::shared_lock lock(mutex);
      auto it = rows.find(x);
      if (it != rows.end()) return it->second;
    }
    Row fresh = make();
    std::unique_lock lock(mutex);
    // try_emplace keeps an entry filled concurrently; both are identical.
    return rows.try_emplace(x, std::move(fresh)).first->second;
  }
};

}  // namespace

struct CountableChain::Memo : RowMemo<TransitionRow> {};
struct CountableRateChain::Memo : RowMemo<RateRow> {};

CountableChain::CountableChain(std::string name, RowFunction row_fn,
                               std::optional<StateFunction> analytic_pi,
                               std::string metadata)
    : name_(std::move(name)),
      row_fn_(std::move(row_fn)),
      analytic_pi_(std::move(analytic_pi)),
      metadata_(std::move(metadata)),
      memo_(std::make_shared<Memo>()) {}

TransitionRow CountableChain::raw_row(StateIndex x) const {
  return TransitionRow::from_entries(row_fn_(x));
}

const TransitionRow& CountableChain::row(StateIndex x) const {
  return memo_->get(x, [&] {
    TransitionRow r = raw_row(x);
    if (auto defect = row_defect(x, r)) {
      throw Error(ErrorCode::kInvalidRow,
                  name_ + " row " + std::to_string(x) + ": " + defect->what +
                      " (defect " + std::to_string(defect->defect) + ")");
    }
    return r;
  });
}

ValidationReport validate_chain(const CountableChain& chain,
                                std::size_t window) {
  if (window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  }
  ValidationReport report;
  report.window = window;
  for (StateIndex x = 0; x < window; ++x) {
    if (auto defect = row_defect(x, chain.raw_row(x))) {
      report.violations.push_back(*defect);
    }
  }
  return report;
}

RateRow RateRow::from_entries(StateIndex self,
                              std::vector<RateTransition> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const RateTransition& a, const RateTransition& b) {
              return a.target < b.target;
            });
  RateRow row;
  for (const RateTransition& e : entries) {
    if (e.target == self) continue;
    if (!row.entries_.empty() && row.entries_.back().target == e.target) {
      row.entries_.back().rate += e.rate;
    } else {
      row.entries_.push_back(e);
    }
  }
  std::erase_if(row.entries_,
                [](const RateTransition& e) { return e.rate == 0.0; });
  for (const RateTransition& e : row.entries_) row.total_rate_ += e.rate;
  return row;
}

double RateRow::rate(StateIndex target) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), target,
      [](const RateTransition& e, StateIndex t) { return e.target < t; });
  if (it == entries_.end() || it->target != target) return 0.0;
  return it->rate;
}

CountableRateChain::CountableRateChain(std::string name, RateRowFunction row_fn,
                                       std::optional<StateFunction> analytic_pi,
                                       std::string metadata)
    : name_(std::move(name)),
      row_fn_(std::move(row_fn)),
      analytic_pi_(std::move(analytic_pi)),
      metadata_(std::move(metadata)),
      memo_(std::make_shared<Memo>()) {}

const RateRow& CountableRateChain::row(StateIndex x) const {
  return memo_->get(x, [&] {
    std::vector<RateTransition> entries = row_fn_(x);
    for (const RateTransition& e : entries) {
      if (!std::isfinite(e.rate) || e.rate < 0.0) {
        throw Error(ErrorCode::kInvalidRow,
                    name_ + " rate row " + std::to_string(x) +
                        " has a negative or non-finite rate");
      }
    }
    return RateRow::from_entries(x, std::move(entries));
  });
}

}  // namespace truncaug

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "truncaug/types.hpp"

namespace truncaug {

struct Transition {
  StateIndex target;
  double prob;
};

/// One row P(x, .) of a countable transition matrix.
///
/// Entries are sorted by target, duplicates are merged and zeros dropped.
/// Row-sum validation is left to the owner (see CountableChain::row).
class TransitionRow {
 public:
  TransitionRow() = default;
  static TransitionRow from_entries(std::vector<Transition> entries);

  std::span<const Transition> entries() const { return entries_; }
  double total() const;
  double prob(StateIndex target) const;

 private:
  std::vector<Transition> entries_;
};

using RowFunction = std::function<std::vector<Transition>(StateIndex)>;

/// Row-generated transition structure over states 0, 1, 2, ...
///
/// Rows are produced on demand by a pure row function and memoized. Copies
/// share the memo table; concurrent readers may fill it.
class CountableChain {
 public:
  CountableChain(std::string name, RowFunction row_fn,
                 std::optional<StateFunction> analytic_pi = std::nullopt,
                 std::string metadata = {});

  /// Materialized, validated row. Throws ErrorCode::kInvalidRow when the row
  /// has negative entries or mass outside 1 +- kRowTolerance.
  const TransitionRow& row(StateIndex x) const;
  /// Row exactly as the row function produced it (merged, unvalidated).
  TransitionRow raw_row(StateIndex x) const;

  const std::string& name() const { return name_; }
  const std::string& metadata() const { return metadata_; }
  const std::optional<StateFunction>& analytic_pi() const {
    return analytic_pi_;
  }

  /// Rows whose true support is infinite are materialized with a dropped
  /// tail below kRowTolerance; drift checks then need a tail bound on g.
  bool infinite_support_rows() const { return infinite_support_rows_; }
  void set_infinite_support_rows(bool value) { infinite_support_rows_ = value; }

 private:
  struct Memo;

  std::string name_;
  RowFunction row_fn_;
  std::optional<StateFunction> analytic_pi_;
  std::string metadata_;
  bool infinite_support_rows_ = false;
  std::shared_ptr<Memo> memo_;
};

struct RowDefect {
  StateIndex state;
  /// 1 - row mass (positive when mass is missing), or the offending entry.
  double defect;
  std::string what;
};

struct ValidationReport {
  std::size_t window = 0;
  std::vector<RowDefect> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks row invariants for states 0..window-1 without throwing.
ValidationReport validate_chain(const CountableChain& chain,
                                std::size_t window);

struct RateTransition {
  StateIndex target;
  double rate;
};

/// Off-diagonal part of a rate-matrix row; the diagonal is -total_rate().
class RateRow {
 public:
  RateRow() = default;
  /// Merges duplicates, drops zero rates and self-transitions.
  static RateRow from_entries(StateIndex self, std::vector<RateTransition> entries);

  std::span<const RateTransition> entries() const { return entries_; }
  double total_rate() const { return total_rate_; }
  double rate(StateIndex target) const;

 private:
  std::vector<RateTransition> entries_;
  double total_rate_ = 0.0;
};

using RateRowFunction = std::function<std::vector<RateTransition>(StateIndex)>;

/// Countable rate matrix Q given row by row through its off-diagonal rates.
class CountableRateChain {
 public:
  CountableRateChain(std::string name, RateRowFunction row_fn,
                     std::optional<StateFunction> analytic_pi = std::nullopt,
                     std::string metadata = {});

  /// Throws ErrorCode::kInvalidRow on negative or non-finite rates.
  const RateRow& row(StateIndex x) const;

  const std::string& name() const { return name_; }
  const std::string& metadata() const { return metadata_; }
  const std::optional<StateFunction>& analytic_pi() const {
    return analytic_pi_;
  }

 private:
  struct Memo;

  std::string name_;
  RateRowFunction row_fn_;
  std::optional<StateFunction> analytic_pi_;
  std::string metadata_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace truncaug

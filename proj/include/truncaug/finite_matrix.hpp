#pragma once

#include <optional>
#include <span>
#include <vector>

#include "truncaug/distribution.hpp"
#include "truncaug/types.hpp"

namespace truncaug {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Entry of a sparse row addressed by local (0-based) column.
struct SparseEntry {
  std::size_t col;
  double value;
};

using SparseRow = std::vector<SparseEntry>;

/// Merges duplicate columns, sorts, and drops exact zeros.
SparseRow canonical_row(SparseRow row);

/// Finite stochastic matrix over an increasing list of global states.
///
/// Stored as sparse rows; exact zeros are never stored, so the positive
/// support graph is read directly off the rows.
class FiniteStochastic {
 public:
  /// Throws ErrorCode::kNotStochastic on negative entries or row mass
  /// outside 1 +- kRowTolerance.
  FiniteStochastic(std::vector<StateIndex> states, std::vector<SparseRow> rows);
  static FiniteStochastic from_dense(std::vector<StateIndex> states,
                                     const DenseMatrix& m);

  std::size_t size() const { return states_.size(); }
  std::span<const StateIndex> states() const { return states_; }
  std::span<const SparseEntry> row(std::size_t i) const { return rows_[i]; }
  double at(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> local_index(StateIndex state) const;
  DenseMatrix to_dense() const;

 private:
  std::vector<StateIndex> states_;
  std::vector<SparseRow> rows_;
};

/// Finite rate matrix; rows hold the off-diagonal rates and the diagonal is
/// minus their sum.
class FiniteRate {
 public:
  /// `off_diagonal` rows must not contain the diagonal column. Throws
  /// ErrorCode::kNotStochastic on negative rates.
  FiniteRate(std::vector<StateIndex> states, std::vector<SparseRow> off_diagonal);

  std::size_t size() const { return states_.size(); }
  std::span<const StateIndex> states() const { return states_; }
  std::span<const SparseEntry> off_diagonal(std::size_t i) const {
    return rows_[i];
  }
  double exit_rate(std::size_t i) const { return exit_rates_[i]; }
  /// Full entry including the diagonal -exit_rate(i).
  double at(std::size_t i, std::size_t j) const;
  DenseMatrix to_dense() const;

 private:
  std::vector<StateIndex> states_;
  std::vector<SparseRow> rows_;
  std::vector<double> exit_rates_;
};

/// mu0 P^m by m sparse vector-matrix products; m = 0 returns mu0 unchanged.
/// Throws ErrorCode::kSupportMismatch if mu0 charges a state outside P.
Distribution m_step_distribution(const FiniteStochastic& P,
                                 const Distribution& mu0, std::size_t m);

/// Dense local vector of `mu` over P's states (zero-padded).
std::vector<double> to_local(const FiniteStochastic& P, const Distribution& mu);
/// Distribution over P's states from a local mass vector (renormalized).
Distribution from_local(std::span<const StateIndex> states,
                        std::span<const double> mass);

/// ||pi P - pi||_1 for a distribution given on P's states.
double stationary_residual(const FiniteStochastic& P, const Distribution& pi);
/// ||pi Q||_inf.
double stationary_residual(const FiniteRate& Q, const Distribution& pi);

}  // namespace truncaug

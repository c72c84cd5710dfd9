#include "truncaug/finite_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "truncaug/error.hpp"

namespace truncaug {

namespace {

void check_states(std::span<const StateIndex> states) {
  if (states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix needs at least one state");
  }
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i] <= states[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "matrix states must be strictly increasing");
    }
  }
}

double find_in_row(std::span<const SparseEntry> row, std::size_t j) {
  auto it = std::lower_bound(
      row.begin(), row.end(), j,
      [](const SparseEntry& e, std::size_t c) { return e.col < c; });
  if (it == row.end() || it->col != j) return 0.0;
  return it->value;
}

}  // namespace

SparseRow canonical_row(SparseRow row) {
  std::sort(row.begin(), row.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
  SparseRow out;
  out.reserve(row.size());
  for (const SparseEntry& e : row) {
    if (!out.empty() && out.back().col == e.col) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const SparseEntry& e) { return e.value == 0.0; });
  return out;
}

FiniteStochastic::FiniteStochastic(std::vector<StateIndex> states,
                                   std::vector<SparseRow> rows)
    : states_(std::move(states)), rows_(std::move(rows)) {
  check_states(states_);
  if (rows_.size() != states_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row count differs from state count");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows_[i] = canonical_row(std::move(rows_[i]));
    double total = 0.0;
    for (const SparseEntry& e : rows_[i]) {
      if (e.col >= states_.size()) {
        throw Error(ErrorCode::kInvalidArgument, "column index out of range");
      }
      if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
        throw Error(ErrorCode::kNotStochastic,
                    "negative entry in row " + std::to_string(i));
      }
      total += e.value;
    }
    if (std::abs(total - 1.0) > kRowTolerance) {
      throw Error(ErrorCode::kNotStochastic,
                  "row " + std::to_string(states_[i]) + " sums to " +
                      std::to_string(total));
    }
  }
}

FiniteStochastic FiniteStochastic::from_dense(std::vector<StateIndex> states,
                                              const DenseMatrix& m) {
  if (m.rows() != states.size() || m.cols() != states.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dense matrix shape mismatch");
  }
  std::vector<SparseRow> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) rows[i].push_back({j, m(i, j)});
    }
  }
  return FiniteStochastic(std::move(states), std::move(rows));
}

double FiniteStochastic::at(std::size_t i, std::size_t j) const {
  return find_in_row(rows_[i], j);
}

std::optional<std::size_t> FiniteStochastic::local_index(StateIndex state) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), state);
  if (it == states_.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

DenseMatrix FiniteStochastic::to_dense() const {
  DenseMatrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (const SparseEntry& e : rows_[i]) m(i, e.col) = e.value;
  }
  return m;
}

FiniteRate::FiniteRate(std::vector<StateIndex> states,
                       std::vector<SparseRow> off_diagonal)
    : states_(std::move(states)), rows_(std::move(off_diagonal)) {
  check_states(states_);
  if (rows_.size() != states_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row count differs from state count");
  }
  exit_rates_.assign(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows_[i] = canonical_row(std::move(rows_[i]));
    for (const SparseEntry& e : rows_[i]) {
      if (e.col >= states_.size() || e.col == i) {
        throw Error(ErrorCode::kInvalidArgument,
                    "off-diagonal row holds an invalid column");
      }
      if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
        throw Error(ErrorCode::kNotStochastic,
                    "negative rate in row " + std::to_string(i));
      }
      exit_rates_[i] += e.value;
    }
  }
}

double FiniteRate::at(std::size_t i, std::size_t j) const {
  if (i == j) return -exit_rates_[i];
  return find_in_row(rows_[i], j);
}

DenseMatrix FiniteRate::to_dense() const {
  DenseMatrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (const SparseEntry& e : rows_[i]) m(i, e.col) = e.value;
    m(i, i) = -exit_rates_[i];
  }
  return m;
}

std::vector<double> to_local(const FiniteStochastic& P, const Distribution& mu) {
  std::vector<double> local(P.size(), 0.0);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double mass = mu.mass()[k];
    auto idx = P.local_index(mu.support()[k]);
    if (!idx) {
      if (mass == 0.0) continue;
      throw Error(ErrorCode::kSupportMismatch,
                  "state " + std::to_string(mu.support()[k]) +
                      " is not a state of the matrix");
    }
    local[*idx] = mass;
  }
  return local;
}

Distribution from_local(std::span<const StateIndex> states,
                        std::span<const double> mass) {
  std::vector<double> weights(mass.begin(), mass.end());
  for (double& w : weights) w = std::max(w, 0.0);
  return Distribution::from_weights({states.begin(), states.end()},
                                    std::move(weights));
}

Distribution m_step_distribution(const FiniteStochastic& P,
                                 const Distribution& mu0, std::size_t m) {
  std::vector<double> current = to_local(P, mu0);
  if (m == 0) return mu0;
  std::vector<double> next(P.size());
  for (std::size_t step = 0; step < m; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
      if (current[i] == 0.0) continue;
      for (const SparseEntry& e : P.row(i)) next[e.col] += current[i] * e.value;
    }
    current.swap(next);
  }
  return from_local(P.states(), current);
}

double stationary_residual(const FiniteStochastic& P, const Distribution& pi) {
  std::vector<double> local = to_local(P, pi);
  std::vector<double> image(P.size(), 0.0);
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (const SparseEntry& e : P.row(i)) image[e.col] += local[i] * e.value;
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) l1 += std::abs(image[i] - local[i]);
  return l1;
}

double stationary_residual(const FiniteRate& Q, const Distribution& pi) {
  std::vector<double> local(Q.size(), 0.0);
  for (std::size_t k = 0; k < pi.size(); ++k) {
    auto it = std::lower_bound(Q.states().begin(), Q.states().end(),
                               pi.support()[k]);
    if (it == Q.states().end() || *it != pi.support()[k]) {
      if (pi.mass()[k] == 0.0) continue;
      throw Error(ErrorCode::kSupportMismatch, "distribution outside rate matrix");
    }
    local[static_cast<std::size_t>(it - Q.states().begin())] = pi.mass()[k];
  }
  std::vector<double> image(Q.size(), 0.0);
  for (std::size_t i = 0; i < Q.size(); ++i) {
    image[i] -= local[i] * Q.exit_rate(i);
    for (const SparseEntry& e : Q.off_diagonal(i)) image[e.col] += local[i] * e.value;
  }
  double worst = 0.0;
  for (double v : image) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace truncaug

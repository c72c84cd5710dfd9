#include "truncaug/regen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "truncaug/error.hpp"
#include "truncaug/rng.hpp"

namespace truncaug {

namespace {

constexpr double kSplitTolerance = 1e-12;

// Differences that should be exact zeros come out at the last-ulp level
// (lambda * (colmin / lambda) != colmin); snap those.
double snap(double value, double scale) {
  return std::abs(value) <= 4.0 * std::numeric_limits<double>::epsilon() * scale ? 0.0
                                                                                : value;
}

SparseRow local_phi(std::span<const StateIndex> states, const Distribution& phi) {
  SparseRow row;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (phi.mass()[k] == 0.0) continue;
    auto it = std::lower_bound(states.begin(), states.end(), phi.support()[k]);
    if (it == states.end() || *it != phi.support()[k]) {
      throw Error(ErrorCode::kInvalidMinorization,
                  "phi charges state " + std::to_string(phi.support()[k]) +
                      " outside the state list");
    }
    row.push_back({static_cast<std::size_t>(it - states.begin()), phi.mass()[k]});
  }
  return row;
}

// row - lambda * phi, with tiny cancellations snapped and a hard error on
// real negatives.
SparseRow subtract_regeneration(std::span<const SparseEntry> row, const SparseRow& phi,
                                double lambda, StateIndex state) {
  SparseRow out;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < row.size() || b < phi.size()) {
    std::size_t col;
    double p = 0.0;
    double reg = 0.0;
    if (b == phi.size() || (a < row.size() && row[a].col < phi[b].col)) {
      col = row[a].col;
      p = row[a++].value;
    } else if (a == row.size() || phi[b].col < row[a].col) {
      col = phi[b].col;
      reg = lambda * phi[b++].value;
    } else {
      col = row[a].col;
      p = row[a++].value;
      reg = lambda * phi[b++].value;
    }
    const double v = snap(p - reg, std::max(p, reg));
    if (v < -kSplitTolerance) {
      throw Error(ErrorCode::kInvalidMinorization,
                  "P(x, y) < lambda phi(y) at x = " + std::to_string(state));
    }
    if (v > 0.0) out.push_back({col, v});
  }
  return out;
}

struct BranchModel {
  double lambda;
  SparseRow phi;
  std::vector<SparseRow> stay;
  std::vector<double> stay_mass;
  std::vector<double> jump_mass;
  std::vector<SparseRow> jump;
};

std::size_t sample(const SparseRow& row, double total, double u) {
  double target = u * total;
  for (const SparseEntry& e : row) {
    target -= e.value;
    if (target < 0.0) return e.col;
  }
  return row.back().col;
}

RegenerativeEstimate run_cycles(const BranchModel& model,
                                std::span<const StateIndex> states,
                                std::size_t num_cycles, std::uint64_t seed) {
  if (num_cycles < 1) throw Error(ErrorCode::kInvalidArgument, "need >= 1 cycle");
  const std::size_t n = states.size();
  std::vector<double> sum_y(n, 0.0), sum_y2(n, 0.0), sum_ytau(n, 0.0);
  std::vector<double> visits(n, 0.0);
  std::vector<std::size_t> touched;
  double sum_tau = 0.0;
  double sum_tau2 = 0.0;
  RegenerativeEstimate est;

  for (std::size_t c = 0; c < num_cycles; ++c) {
    std::mt19937_64 engine = substream(seed, c);
    std::size_t x = sample(model.phi, 1.0, uniform01(engine));
    std::size_t tau = 0;
    bool decoupled = false;
    touched.clear();
    for (;;) {
      if (visits[x] == 0.0) touched.push_back(x);
      visits[x] += 1.0;
      ++tau;
      const double u = uniform01(engine);
      if (u < model.lambda) break;
      const bool jump = model.jump_mass[x] > 0.0 &&
                        u >= model.lambda + model.stay_mass[x];
      if (jump) {
        decoupled = true;
        x = sample(model.jump[x], 1.0, uniform01(engine));
      } else {
        // stay_mass can only be zero here if lambda + r(x) = 1 and the
        // rounding of u landed in between; regenerate in that case.
        if (model.stay[x].empty()) break;
        x = sample(model.stay[x], model.stay_mass[x], uniform01(engine));
      }
    }
    const double t = static_cast<double>(tau);
    sum_tau += t;
    sum_tau2 += t * t;
    est.max_cycle_length = std::max(est.max_cycle_length, tau);
    if (decoupled) ++est.decoupled_cycles;
    for (std::size_t s : touched) {
      sum_y[s] += visits[s];
      sum_y2[s] += visits[s] * visits[s];
      sum_ytau[s] += visits[s] * t;
      visits[s] = 0.0;
    }
  }

  const double N = static_cast<double>(num_cycles);
  const double tau_mean = sum_tau / N;
  est.states.assign(states.begin(), states.end());
  est.num_cycles = num_cycles;
  est.tau_mean = tau_mean;
  const double tau_var = num_cycles > 1
                             ? std::max(0.0, (sum_tau2 - N * tau_mean * tau_mean) / (N - 1))
                             : 0.0;
  est.tau_stderr = std::sqrt(tau_var / N);
  est.occupation_mean.resize(n);
  est.occupation_stderr.resize(n);
  est.pi_stderr.resize(n);
  std::vector<double> pi(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double mean = sum_y[s] / N;
    est.occupation_mean[s] = mean;
    const double var =
        num_cycles > 1 ? std::max(0.0, (sum_y2[s] - N * mean * mean) / (N - 1)) : 0.0;
    est.occupation_stderr[s] = std::sqrt(var / N);
    pi[s] = sum_y[s] / sum_tau;
    // Delta method for the ratio: Z = Y - pi tau has mean zero.
    const double z2 = sum_y2[s] - 2.0 * pi[s] * sum_ytau[s] + pi[s] * pi[s] * sum_tau2;
    const double zvar = num_cycles > 1 ? std::max(0.0, z2 / (N - 1)) : 0.0;
    est.pi_stderr[s] = std::sqrt(zvar / N) / tau_mean;
  }
  est.pi_hat = from_local(states, pi);
  return est;
}

BranchModel model_of(const SplitKernel& split) {
  const std::size_t n = split.states.size();
  BranchModel model{split.minorization.lambda,
                    local_phi(split.states, split.minorization.phi),
                    std::vector<SparseRow>(n), std::vector<double>(n, 0.0),
                    std::vector<double>(n, 0.0), std::vector<SparseRow>(n)};
  if (split.residual) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const SparseEntry& e : split.residual->row(i)) {
        model.stay[i].push_back(e);
        model.stay_mass[i] += e.value;
      }
      // H-branch probability is 1 - lambda; the sampler normalizes rows by
      // stay_mass, which is H's row sum.
    }
  }
  return model;
}

BranchModel model_of(const AugmentedSplit& split) {
  const std::size_t n = split.states.size();
  BranchModel model{split.minorization.lambda,
                    local_phi(split.states, split.minorization.phi), split.stay,
                    split.q, split.r, std::vector<SparseRow>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (split.redistribution[i]) model.jump[i] = *split.redistribution[i];
  }
  return model;
}

// Solves (I - K) u = rhs for a row-substochastic K with row sums < 1.
std::vector<double> solve_absorption(const std::vector<SparseRow>& K,
                                     std::vector<double> rhs) {
  const std::size_t n = K.size();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (const SparseEntry& e : K[i]) a(i, e.col) -= e.value;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(rhs[k], rhs[pivot]);
    }
    const double d = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / d;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<double> u(n);
  for (std::size_t k = n; k-- > 0;) {
    double acc = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a(k, j) * u[j];
    u[k] = acc / a(k, k);
  }
  return u;
}

// (I - K)^{-1} by Gauss-Jordan with partial pivoting.
DenseMatrix fundamental_matrix(const std::vector<SparseRow>& K) {
  const std::size_t n = K.size();
  DenseMatrix a(n, n);
  DenseMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    inv(i, i) = 1.0;
    for (const SparseEntry& e : K[i]) a(i, e.col) -= e.value;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(pivot, j));
        std::swap(inv(k, j), inv(pivot, j));
      }
    }
    const double d = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= d;
      inv(k, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double f = a(i, k);
      if (i == k || f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

// Exact asymptotic standard deviation of the ratio estimator: with
// D = sum_{j < tau} (1{X_j = y} - pi(y)), h = E_x D and s = E_x D^2 solve
// h = f + K h and s = f^2 + 2 f (K h) + K s.
std::vector<double> ratio_stddev(const std::vector<SparseRow>& K, const SparseRow& phi,
                                 std::span<const StateIndex> states, const Distribution& pi,
                                 std::size_t num_cycles) {
  if (num_cycles < 1) throw Error(ErrorCode::kInvalidArgument, "need >= 1 cycle");
  const std::size_t n = states.size();
  const DenseMatrix N = fundamental_matrix(K);
  std::vector<double> w(n, 0.0);  // phi^T N
  for (const SparseEntry& e : phi) {
    for (std::size_t j = 0; j < n; ++j) w[j] += e.value * N(e.col, j);
  }
  std::vector<double> m(n, 0.0);  // E_x tau = N 1
  double tau_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i] += N(i, j);
    tau_mean += w[i];
  }
  std::vector<double> out(n);
  std::vector<double> h(n);
  for (std::size_t y = 0; y < n; ++y) {
    const double p = pi.at(states[y]);
    for (std::size_t i = 0; i < n; ++i) h[i] = N(i, y) - p * m[i];
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = (i == y ? 1.0 : 0.0) - p;
      double kh = 0.0;
      for (const SparseEntry& e : K[i]) kh += e.value * h[e.col];
      mean += w[i] * f;
      second += w[i] * (f * f + 2.0 * f * kh);
    }
    const double var = std::max(0.0, second - mean * mean);
    out[y] = std::sqrt(var / static_cast<double>(num_cycles)) / tau_mean;
  }
  return out;
}

}  // namespace

Minorization find_minorization(const FiniteStochastic& P,
                               const std::optional<TruncationSet>& restriction) {
  const std::size_t n = P.size();
  std::vector<double> col_min(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> present(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const SparseEntry& e : P.row(i)) {
      col_min[e.col] = std::min(col_min[e.col], e.value);
      ++present[e.col];
    }
  }
  std::vector<StateIndex> support;
  std::vector<double> weights;
  for (std::size_t j = 0; j < n; ++j) {
    if (present[j] != n) continue;  // some row misses column j
    if (restriction && !restriction->contains(P.states()[j])) continue;
    support.push_back(P.states()[j]);
    weights.push_back(col_min[j]);
  }
  double lambda = 0.0;
  for (double w : weights) lambda += w;
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kNotStronglyUniformlyRecurrent,
                "column minima vanish; no one-step minorization");
  }
  return Minorization{std::min(lambda, 1.0),
                      Distribution::from_weights(std::move(support), std::move(weights))};
}

SplitKernel split_kernel(const FiniteStochastic& P, const Minorization& m) {
  SplitKernel out{m, std::nullopt, {P.states().begin(), P.states().end()}};
  const SparseRow phi = local_phi(P.states(), m.phi);
  std::vector<SparseRow> h(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    h[i] = subtract_regeneration(P.row(i), phi, m.lambda, P.states()[i]);
  }
  if (m.lambda >= 1.0 - kSplitTolerance) return out;  // rows all equal phi
  for (SparseRow& row : h) {
    for (SparseEntry& e : row) e.value /= (1.0 - m.lambda);
  }
  out.residual.emplace(out.states, std::move(h));
  return out;
}

AugmentedSplit split_augmented(const AugmentedMatrix& augmented, const Minorization& m) {
  const FiniteStochastic& Pn = augmented.matrix;
  const TruncationBlock& block = augmented.base;
  const std::size_t n = Pn.size();
  const SparseRow phi = local_phi(Pn.states(), m.phi);

  AugmentedSplit out{m, {Pn.states().begin(), Pn.states().end()},
                     std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     std::vector<SparseRow>(n),
                     std::vector<std::optional<SparseRow>>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const StateIndex x = Pn.states()[i];
    out.r[i] = block.exit[i];
    double in_set = 0.0;
    for (const SparseEntry& e : block.rows[i]) in_set += e.value;
    out.q[i] = in_set - m.lambda;
    if (out.q[i] < -kSplitTolerance) {
      throw Error(ErrorCode::kInvalidMinorization,
                  "q_n(" + std::to_string(x) + ") = " + std::to_string(out.q[i]) +
                      " < 0: phi is not carried by the truncation set");
    }
    out.q[i] = std::max(out.q[i], 0.0);

    // H-branch rows come from P_n itself: P_n - lambda phi - r R_n.
    SparseRow without_regen = subtract_regeneration(Pn.row(i), phi, m.lambda, x);
    if (out.r[i] > 0.0) {
      out.redistribution[i] = augmented.redistribution[i];
      SparseRow minus_jump = without_regen;
      for (const SparseEntry& e : *augmented.redistribution[i]) {
        minus_jump.push_back({e.col, -out.r[i] * e.value});
      }
      // Merge, then snap cancellations relative to the P_n entry.
      SparseRow merged = canonical_row(std::move(minus_jump));
      SparseRow cleaned;
      for (const SparseEntry& e : merged) {
        const double scale = std::max(Pn.at(i, e.col), 1e-300);
        const double v = snap(e.value, scale);
        if (v < -kSplitTolerance) {
          throw Error(ErrorCode::kInvalidMinorization,
                      "negative H-branch mass at state " + std::to_string(x));
        }
        if (v > 0.0) cleaned.push_back({e.col, v});
      }
      without_regen = std::move(cleaned);
    }
    double stay_mass = 0.0;
    for (const SparseEntry& e : without_regen) stay_mass += e.value;
    if (std::abs(stay_mass - out.q[i]) > kSplitTolerance ||
        std::abs(m.lambda + out.q[i] + out.r[i] - 1.0) > kSplitTolerance) {
      throw Error(ErrorCode::kInvalidMinorization,
                  "lambda + q_n + r_n != 1 at state " + std::to_string(x));
    }
    out.stay[i] = std::move(without_regen);
  }
  return out;
}

RegenerativeEstimate simulate_cycles(const SplitKernel& split, std::size_t num_cycles,
                                     std::uint64_t seed) {
  return run_cycles(model_of(split), split.states, num_cycles, seed);
}

RegenerativeEstimate simulate_cycles(const AugmentedSplit& split,
                                     std::size_t num_cycles, std::uint64_t seed) {
  return run_cycles(model_of(split), split.states, num_cycles, seed);
}

DecouplingEstimate coupled_decoupling_prob(const AugmentedSplit& split,
                                           std::size_t num_cycles, std::uint64_t seed,
                                           double z) {
  const RegenerativeEstimate est = simulate_cycles(split, num_cycles, seed);
  const double N = static_cast<double>(num_cycles);
  const double p = static_cast<double>(est.decoupled_cycles) / N;
  const double se = std::sqrt(p * (1.0 - p) / N);
  return {p, se, z * se};
}

double decoupling_probability_exact(const AugmentedSplit& split) {
  const std::vector<double> u = solve_absorption(split.stay, split.r);
  double p = 0.0;
  for (const SparseEntry& e : local_phi(split.states, split.minorization.phi)) {
    p += e.value * u[e.col];
  }
  return p;
}

double decoupling_probability_exact(const CountableChain& chain,
                                    const TruncationSet& set, const Minorization& m) {
  const std::size_t n = set.size();
  const SparseRow phi = local_phi(set.states(), m.phi);
  std::vector<SparseRow> K(n);
  std::vector<double> leave(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const StateIndex x = set.states()[i];
    SparseRow inside;
    for (const Transition& t : chain.row(x).entries()) {
      if (auto j = set.local_index(t.target)) {
        inside.push_back({*j, t.prob});
      } else {
        leave[i] += t.prob;
      }
    }
    K[i] = subtract_regeneration(inside, phi, m.lambda, x);
  }
  const std::vector<double> u = solve_absorption(K, leave);
  double p = 0.0;
  for (const SparseEntry& e : phi) p += e.value * u[e.col];
  return p;
}

std::vector<double> ratio_estimator_stddev(const SplitKernel& split, const Distribution& pi,
                                           std::size_t num_cycles) {
  const std::size_t n = split.states.size();
  std::vector<SparseRow> K(n);
  if (split.residual) {
    const double w = 1.0 - split.minorization.lambda;
    for (std::size_t i = 0; i < n; ++i) {
      for (const SparseEntry& e : split.residual->row(i)) K[i].push_back({e.col, w * e.value});
    }
  }
  return ratio_stddev(K, local_phi(split.states, split.minorization.phi), split.states, pi,
                      num_cycles);
}

std::vector<double> ratio_estimator_stddev(const AugmentedSplit& split,
                                           const Distribution& pi, std::size_t num_cycles) {
  std::vector<SparseRow> K = split.stay;
  for (std::size_t i = 0; i < K.size(); ++i) {
    if (!split.redistribution[i]) continue;
    for (const SparseEntry& e : *split.redistribution[i]) {
      K[i].push_back({e.col, split.r[i] * e.value});
    }
    K[i] = canonical_row(std::move(K[i]));
  }
  return ratio_stddev(K, local_phi(split.states, split.minorization.phi), split.states, pi,
                      num_cycles);
}

}  // namespace truncaug

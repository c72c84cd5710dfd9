#include "truncaug/solve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "truncaug/error.hpp"

namespace truncaug {

namespace {

using Graph = std::vector<std::vector<std::size_t>>;

// Iterative Tarjan; returns component id per vertex and the component count.
std::pair<std::vector<std::size_t>, std::size_t> strong_components(const Graph& graph) {
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  const std::size_t n = graph.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  std::size_t count = 0;

  struct Frame {
    std::size_t vertex;
    std::size_t next_edge;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& frame = call.back();
      const std::size_t v = frame.vertex;
      if (frame.next_edge < graph[v].size()) {
        const std::size_t w = graph[v][frame.next_edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = count;
        } while (w != v);
        ++count;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().vertex;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return {std::move(component), count};
}

ClosedClassDecomposition decompose(const Graph& graph) {
  auto [component, count] = strong_components(graph);
  std::vector<bool> is_sink(count, true);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (std::size_t w : graph[v]) {
      if (component[w] != component[v]) is_sink[component[v]] = false;
    }
  }
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < graph.size(); ++v) members[component[v]].push_back(v);

  ClosedClassDecomposition out;
  for (std::size_t c = 0; c < count; ++c) {
    if (is_sink[c]) out.classes.push_back(members[c]);
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (!is_sink[component[v]]) out.transient.push_back(v);
  }
  return out;
}

Distribution pad_to_states(std::span<const StateIndex> states,
                           const Distribution& on_class) {
  std::vector<double> mass(states.size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) mass[i] = on_class.at(states[i]);
  return Distribution({states.begin(), states.end()}, std::move(mass));
}

StationarySet stationary_set_from(const FiniteStochastic& P,
                                  ClosedClassDecomposition decomposition) {
  StationarySet out;
  for (const auto& members : decomposition.classes) {
    out.extremes.push_back(pad_to_states(P.states(), gth_stationary(P, members)));
  }
  out.decomposition = std::move(decomposition);
  return out;
}

}  // namespace

ClosedClassDecomposition closed_classes(const FiniteStochastic& P) {
  Graph graph(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (const SparseEntry& e : P.row(i)) {
      if (e.value > 0.0) graph[i].push_back(e.col);
    }
  }
  return decompose(graph);
}

ClosedClassDecomposition closed_classes(const FiniteRate& Q) {
  Graph graph(Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) {
    for (const SparseEntry& e : Q.off_diagonal(i)) {
      if (e.value > 0.0) graph[i].push_back(e.col);
    }
  }
  return decompose(graph);
}

Distribution gth_stationary(const FiniteStochastic& P,
                            const std::vector<std::size_t>& members) {
  const std::size_t n = members.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty class");
  std::vector<std::size_t> position(P.size(), n);
  for (std::size_t k = 0; k < n; ++k) position[members[k]] = k;

  DenseMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double inside = 0.0;
    for (const SparseEntry& e : P.row(members[k])) {
      if (position[e.col] < n) {
        a(k, position[e.col]) = e.value;
        inside += e.value;
      }
    }
    if (std::abs(1.0 - inside) > kRowTolerance) {
      throw Error(ErrorCode::kClassNotClosed,
                  "row of state " + std::to_string(P.states()[members[k]]) +
                      " leaks mass " + std::to_string(1.0 - inside));
    }
  }

  // State reduction: eliminate n-1, ..., 1. The pivot s is a sum of
  // nonnegative entries, so no cancellation occurs.
  std::vector<double> pivot(n, 0.0);
  std::vector<std::size_t> row_support;
  for (std::size_t k = n - 1; k >= 1; --k) {
    double s = 0.0;
    row_support.clear();
    for (std::size_t j = 0; j < k; ++j) {
      if (a(k, j) != 0.0) {
        s += a(k, j);
        row_support.push_back(j);
      }
    }
    if (!(s > 0.0)) {
      throw Error(ErrorCode::kClassNotClosed,
                  "matrix is not irreducible on the given class");
    }
    pivot[k] = s;
    for (std::size_t i = 0; i < k; ++i) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double f = aik / s;
      for (std::size_t j : row_support) a(i, j) += f * a(k, j);
    }
  }

  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += pi[i] * a(i, k);
    pi[k] = acc / pivot[k];
    total += pi[k];
  }
  std::vector<StateIndex> support(n);
  for (std::size_t k = 0; k < n; ++k) support[k] = P.states()[members[k]];
  // members need not be sorted by state; Distribution wants increasing support.
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return support[x] < support[y]; });
  std::vector<StateIndex> sorted_support(n);
  std::vector<double> sorted_mass(n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted_support[k] = support[order[k]];
    sorted_mass[k] = pi[order[k]] / total;
  }
  return Distribution(std::move(sorted_support), std::move(sorted_mass));
}

Distribution gth_stationary(const FiniteStochastic& P) {
  std::vector<std::size_t> all(P.size());
  for (std::size_t k = 0; k < P.size(); ++k) all[k] = k;
  return gth_stationary(P, all);
}

StationarySet stationary_set(const FiniteStochastic& P) {
  return stationary_set_from(P, closed_classes(P));
}

Distribution power_iteration(const FiniteStochastic& P, const Distribution& mu0,
                             double tol, std::size_t max_iter) {
  std::vector<double> current = to_local(P, mu0);
  std::vector<double> next(P.size());
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
      if (current[i] == 0.0) continue;
      for (const SparseEntry& e : P.row(i)) next[e.col] += current[i] * e.value;
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < P.size(); ++i) l1 += std::abs(next[i] - current[i]);
    current.swap(next);
    if (0.5 * l1 < tol) return from_local(P.states(), current);
  }
  throw Error(ErrorCode::kNoConvergence,
              "power iteration did not converge in " + std::to_string(max_iter) +
                  " steps");
}

FiniteStochastic uniformize(const FiniteRate& Q) {
  double max_rate = 0.0;
  for (std::size_t i = 0; i < Q.size(); ++i) max_rate = std::max(max_rate, Q.exit_rate(i));
  const double scale = max_rate > 0.0 ? 1.05 * max_rate : 1.0;
  std::vector<SparseRow> rows(Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) {
    double off = 0.0;
    for (const SparseEntry& e : Q.off_diagonal(i)) {
      rows[i].push_back({e.col, e.value / scale});
      off += e.value / scale;
    }
    rows[i].push_back({i, 1.0 - off});
  }
  return FiniteStochastic({Q.states().begin(), Q.states().end()}, std::move(rows));
}

StationarySet ctmc_stationary_set(const FiniteRate& Q) {
  return stationary_set_from(uniformize(Q), closed_classes(Q));
}

Distribution ctmc_stationary(const FiniteRate& Q) {
  StationarySet set = ctmc_stationary_set(Q);
  if (!set.unique()) {
    throw Error(ErrorCode::kMultipleClosedClasses,
                std::to_string(set.extremes.size()) + " closed classes");
  }
  return std::move(set.extremes.front());
}

}  // namespace truncaug

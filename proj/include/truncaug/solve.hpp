#pragma once

#include <cstddef>
#include <vector>

#include "truncaug/distribution.hpp"
#include "truncaug/finite_matrix.hpp"

namespace truncaug {

/// Closed communicating classes (sink strongly connected components of the
/// positive-support graph) and the remaining transient states, all in local
/// indices. Classes are ordered by their smallest member.
struct ClosedClassDecomposition {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> transient;
};

ClosedClassDecomposition closed_classes(const FiniteStochastic& P);
ClosedClassDecomposition closed_classes(const FiniteRate& Q);

/// Stationary law of an irreducible stochastic matrix by GTH state
/// reduction. Throws kClassNotClosed when some row leaks mass or the matrix
/// is not irreducible.
Distribution gth_stationary(const FiniteStochastic& P);

/// GTH on the submatrix of P over `members` (local indices); the result is
/// supported on those states only.
Distribution gth_stationary(const FiniteStochastic& P,
                            const std::vector<std::size_t>& members);

struct StationarySet {
  /// One extreme stationary law per closed class, each zero-padded to the
  /// full state list of the matrix.
  std::vector<Distribution> extremes;
  ClosedClassDecomposition decomposition;

  bool unique() const { return extremes.size() == 1; }
};

StationarySet stationary_set(const FiniteStochastic& P);

/// Iterates mu <- mu P until the total-variation step falls below tol.
/// Throws kNoConvergence after max_iter steps.
Distribution power_iteration(const FiniteStochastic& P, const Distribution& mu0,
                             double tol, std::size_t max_iter);

/// Uniformized DTMC P = I + Q / L with L = 1.05 max exit rate (L = 1 if Q is 0).
FiniteStochastic uniformize(const FiniteRate& Q);

/// Stationary set of a rate matrix (one extreme per closed class).
StationarySet ctmc_stationary_set(const FiniteRate& Q);

/// Unique pi with pi Q = 0. Throws kMultipleClosedClasses otherwise.
Distribution ctmc_stationary(const FiniteRate& Q);

}  // namespace truncaug

#pragma once

#include <cstddef>
#include <functional>

namespace truncaug {

/// Global state label under the caller's enumeration of the state space.
using StateIndex = std::size_t;

/// Real-valued function on states (Lyapunov functions, reference masses).
using StateFunction = std::function<double(StateIndex)>;

/// Row-mass tolerance for transition rows and stochastic matrices.
inline constexpr double kRowTolerance = 1e-12;
/// Probability vectors must sum to one within this.
inline constexpr double kMassTolerance = 1e-12;
/// Rate-matrix rows must sum to zero within this.
inline constexpr double kRateRowTolerance = 1e-10;

}  // namespace truncaug

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "truncaug/countable_chain.hpp"
#include "truncaug/distribution.hpp"
#include "truncaug/finite_matrix.hpp"
#include "truncaug/types.hpp"

namespace truncaug {

/// Drift certificate (P g)(x) <= g(x) - r(x) + b, or (Q g)(x) <= -r(x) + b
/// for rate matrices.
struct LyapunovCertificate {
  StateFunction g;
  StateFunction r;
  double b = 0.0;
  /// False for certificates such as (P g) <= g - 1 off a finite set, whose r
  /// is not coercive; drift reports then flag them as outside the
  /// convergence hypotheses.
  bool claims_coercive_r = true;
  /// Upper bound on the g-mass of the unmaterialized row tail, required for
  /// chains whose rows have infinite support.
  std::optional<StateFunction> g_tail_bound;
};

/// A drift slack counts as a violation below -kDriftTolerance * scale, with
/// scale = max(1, g(x) + b, |(P g)(x)|).
inline constexpr double kDriftTolerance = 1e-9;

struct DriftEntry {
  StateIndex state;
  double pg;
  double g;
  double r;
  /// g - r + b - P g (or -r + b - Q g).
  double slack;
  /// slack / scale, see kDriftTolerance.
  double relative_slack;
};

struct DriftReport {
  std::size_t window = 0;
  double worst_slack = 0.0;
  double worst_relative_slack = 0.0;
  std::vector<DriftEntry> entries;
  std::vector<StateIndex> violations;
  bool within_hypotheses = true;

  bool pass() const { return violations.empty(); }
};

/// Drift check on states 0..window-1 of a countable chain. Throws
/// kInfiniteSupportNoBound for infinite-support rows without a tail bound.
DriftReport drift_check(const CountableChain& chain,
                        const LyapunovCertificate& cert, std::size_t window);

/// Drift check on every state of a finite (e.g. augmented) matrix; g and r
/// are evaluated at the global state labels.
DriftReport drift_check(const FiniteStochastic& P, const LyapunovCertificate& cert);

/// Generator drift (Q g)(x) = sum_y Q(x, y) g(y) <= -r(x) + b.
DriftReport rate_drift_check(const CountableRateChain& chain,
                             const LyapunovCertificate& cert, std::size_t window);

struct StationaryBound {
  double value;  ///< sum_x pi(x) r(x)
  bool pass;     ///< value <= b + 1e-9
};

StationaryBound stationary_bound_check(const Distribution& pi,
                                       const LyapunovCertificate& cert);

struct MonotonicityViolation {
  StateIndex x;
  StateIndex y;
  double tail_x;       ///< sum_{w >= y} P(x, w)
  double tail_next;    ///< sum_{w >= y} P(x + 1, w)
};

struct MonotonicityReport {
  std::size_t window = 0;
  std::vector<MonotonicityViolation> violations;
  bool monotone() const { return violations.empty(); }
};

/// Stochastic monotonicity on the window: tail masses sum_{w >= y} P(x, w)
/// nondecreasing in x for x < window - 1 and y <= window.
MonotonicityReport monotonicity_check(const CountableChain& chain,
                                      std::size_t window);

enum class CoercivityVerdict { kPass, kWindowSuspect };

/// Heuristic finiteness evidence for {f <= level}: pass iff f > level on the
/// top decile of 0..window-1.
CoercivityVerdict coercivity_window_check(const StateFunction& f, double level,
                                          std::size_t window);

}  // namespace truncaug

#include "truncaug/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "truncaug/error.hpp"

namespace truncaug {

namespace {

void record(DriftReport& report, StateIndex x, double pg, double g, double r,
            double bound_side) {
  const double slack = bound_side - pg;
  const double scale = std::max({1.0, std::abs(bound_side), std::abs(pg)});
  const double relative = slack / scale;
  report.entries.push_back({x, pg, g, r, slack, relative});
  if (report.entries.size() == 1) {
    report.worst_slack = slack;
    report.worst_relative_slack = relative;
  } else {
    report.worst_slack = std::min(report.worst_slack, slack);
    report.worst_relative_slack = std::min(report.worst_relative_slack, relative);
  }
  if (relative < -kDriftTolerance) report.violations.push_back(x);
}

}  // namespace

DriftReport drift_check(const CountableChain& chain,
                        const LyapunovCertificate& cert, std::size_t window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  if (chain.infinite_support_rows() && !cert.g_tail_bound) {
    throw Error(ErrorCode::kInfiniteSupportNoBound,
                chain.name() + " has infinite-support rows and no tail bound on g");
  }
  DriftReport report;
  report.window = window;
  report.within_hypotheses = cert.claims_coercive_r;
  for (StateIndex x = 0; x < window; ++x) {
    double pg = 0.0;
    for (const Transition& t : chain.row(x).entries()) pg += t.prob * cert.g(t.target);
    if (cert.g_tail_bound) pg += (*cert.g_tail_bound)(x);
    const double g = cert.g(x);
    const double r = cert.r(x);
    record(report, x, pg, g, r, g - r + cert.b);
  }
  return report;
}

DriftReport drift_check(const FiniteStochastic& P, const LyapunovCertificate& cert) {
  DriftReport report;
  report.window = P.size();
  report.within_hypotheses = cert.claims_coercive_r;
  for (std::size_t i = 0; i < P.size(); ++i) {
    double pg = 0.0;
    for (const SparseEntry& e : P.row(i)) pg += e.value * cert.g(P.states()[e.col]);
    const StateIndex x = P.states()[i];
    const double g = cert.g(x);
    const double r = cert.r(x);
    record(report, x, pg, g, r, g - r + cert.b);
  }
  return report;
}

DriftReport rate_drift_check(const CountableRateChain& chain,
                             const LyapunovCertificate& cert, std::size_t window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  DriftReport report;
  report.window = window;
  report.within_hypotheses = cert.claims_coercive_r;
  for (StateIndex x = 0; x < window; ++x) {
    const RateRow& row = chain.row(x);
    const double g = cert.g(x);
    double qg = 0.0;
    for (const RateTransition& t : row.entries()) qg += t.rate * (cert.g(t.target) - g);
    const double r = cert.r(x);
    record(report, x, qg, g, r, -r + cert.b);
  }
  return report;
}

StationaryBound stationary_bound_check(const Distribution& pi,
                                       const LyapunovCertificate& cert) {
  const double value = pi.expectation(cert.r);
  return {value, value <= cert.b + 1e-9};
}

MonotonicityReport monotonicity_check(const CountableChain& chain,
                                      std::size_t window) {
  if (window < 2) throw Error(ErrorCode::kInvalidArgument, "window must be >= 2");
  MonotonicityReport report;
  report.window = window;
  // Tail masses T(x, y) for y = 0..window; T(x, y) = 1 - head mass below y,
  // which stays exact when the row extends past the window.
  auto tails = [&](StateIndex x) {
    std::vector<double> tail(window + 1, 0.0);
    const TransitionRow& row = chain.row(x);
    double head = 0.0;
    auto it = row.entries().begin();
    for (StateIndex y = 0; y <= window; ++y) {
      while (it != row.entries().end() && it->target < y) head += (it++)->prob;
      tail[y] = 1.0 - head;
    }
    return tail;
  };
  std::vector<double> current = tails(0);
  for (StateIndex x = 0; x + 1 < window; ++x) {
    std::vector<double> next = tails(x + 1);
    for (StateIndex y = 0; y <= window; ++y) {
      if (next[y] < current[y] - 1e-12) {
        report.violations.push_back({x, y, current[y], next[y]});
      }
    }
    current = std::move(next);
  }
  return report;
}

CoercivityVerdict coercivity_window_check(const StateFunction& f, double level,
                                          std::size_t window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  const std::size_t decile = std::max<std::size_t>(1, (window + 9) / 10);
  for (StateIndex x = window - decile; x < window; ++x) {
    if (!(f(x) > level)) return CoercivityVerdict::kWindowSuspect;
  }
  return CoercivityVerdict::kPass;
}

}  // namespace truncaug

#include "truncaug/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "truncaug/error.hpp"

namespace truncaug {

namespace {

void check_increasing(std::span<const StateIndex> support) {
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (support[i] <= support[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distribution support must be strictly increasing");
    }
  }
}

}  // namespace

Distribution::Distribution(std::vector<StateIndex> support,
                           std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (support_.size() != mass_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "support and mass have different lengths");
  }
  if (support_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty distribution");
  }
  check_increasing(support_);
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distribution mass must be finite and nonnegative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "distribution mass sums to " + std::to_string(total));
  }
}

Distribution Distribution::point_mass(StateIndex state) {
  return Distribution({state}, {1.0});
}

Distribution Distribution::from_weights(std::vector<StateIndex> support,
                                        std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "negative weight");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weights sum to zero");
  }
  for (double& w : weights) w /= total;
  return Distribution(std::move(support), std::move(weights));
}

Distribution Distribution::uniform(std::vector<StateIndex> support) {
  std::vector<double> weights(support.size(), 1.0);
  return from_weights(std::move(support), std::move(weights));
}

double Distribution::at(StateIndex state) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), state);
  if (it == support_.end() || *it != state) return 0.0;
  return mass_[static_cast<std::size_t>(it - support_.begin())];
}

double Distribution::expectation(const StateFunction& f) const {
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (mass_[i] > 0.0) total += mass_[i] * f(support_[i]);
  }
  return total;
}

double tv_distance(const Distribution& p, const Distribution& q) {
  auto ps = p.support();
  auto qs = q.support();
  auto pm = p.mass();
  auto qm = q.mass();
  double l1 = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ps.size() || j < qs.size()) {
    if (j == qs.size() || (i < ps.size() && ps[i] < qs[j])) {
      l1 += pm[i++];
    } else if (i == ps.size() || qs[j] < ps[i]) {
      l1 += qm[j++];
    } else {
      l1 += std::abs(pm[i++] - qm[j++]);
    }
  }
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

}  // namespace truncaug

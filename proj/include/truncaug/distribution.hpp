#pragma once

#include <span>
#include <vector>

#include "truncaug/types.hpp"

namespace truncaug {

/// Finite probability vector keyed by global state indices.
///
/// The support is kept strictly increasing; states outside it carry zero
/// mass. Zero entries inside the support are allowed (zero-padded vectors).
class Distribution {
 public:
  /// Validates ordering, nonnegativity and unit mass (within kMassTolerance).
  Distribution(std::vector<StateIndex> support, std::vector<double> mass);

  static Distribution point_mass(StateIndex state);
  /// Normalizes nonnegative weights; throws if they sum to zero.
  static Distribution from_weights(std::vector<StateIndex> support,
                                   std::vector<double> weights);
  /// Uniform law on the given (strictly increasing) states.
  static Distribution uniform(std::vector<StateIndex> support);

  std::span<const StateIndex> support() const { return support_; }
  std::span<const double> mass() const { return mass_; }
  std::size_t size() const { return support_.size(); }

  /// Mass at a global state (zero outside the support).
  double at(StateIndex state) const;
  /// Mass-weighted sum of f over the support.
  double expectation(const StateFunction& f) const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<StateIndex> support_;
  std::vector<double> mass_;
};

/// Total-variation distance, half the L1 distance over the union support.
double tv_distance(const Distribution& p, const Distribution& q);

}  // namespace truncaug

#pragma once

#include <iosfwd>
#include <string>

#include "truncaug/augmentation.hpp"
#include "truncaug/distribution.hpp"
#include "truncaug/lyapunov.hpp"
#include "truncaug/regen.hpp"
#include "truncaug/truncation.hpp"

namespace truncaug {

/// Shortest decimal form that round-trips a double.
std::string format_real(double value);

/// `state,mass`, one row per support state in increasing order.
void write_distribution_csv(std::ostream& out, const Distribution& pi);
Distribution read_distribution_csv(std::istream& in);

/// `state`, one row per member.
void write_truncation_set_csv(std::ostream& out, const TruncationSet& set);
TruncationSet read_truncation_set_csv(std::istream& in);

/// Dense matrix; the header row lists the state indices, and row k holds
/// P_n(states[k], .).
void write_augmented_csv(std::ostream& out, const AugmentedMatrix& augmented);

/// `state,Pg,g,r,slack`.
void write_drift_csv(std::ostream& out, const DriftReport& report);

/// `state,occupation_mean,occupation_ci`, a blank line, then `scalar,value`
/// rows for tau_mean, p_decouple and p_ci.
void write_simulation_csv(std::ostream& out, const RegenerativeEstimate& est,
                          double p_decouple, double p_ci, double z = 3.0);

}  // namespace truncaug

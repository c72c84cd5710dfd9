#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace truncaug::example3 {

/// Exact point in [0, 1] written as mantissa * 2^{-halvings}, so repeated
/// halving never underflows into the atom at 0.
struct Point {
  double mantissa = 0.0;
  std::int64_t halvings = 0;

  static Point of(double x) { return {x, 0}; }
  double value() const;
  bool is_zero() const { return mantissa == 0.0; }
  bool is_one() const { return mantissa == 1.0 && halvings == 0; }
  bool operator==(const Point&) const = default;
};

/// Purely atomic kernel row: finitely many (target, probability) pairs.
struct Atom {
  double target;
  double prob;
};
using AtomicRow = std::vector<Atom>;
using AtomicKernel = std::function<AtomicRow(double)>;

/// The weakly continuous kernel on S = [0, 2]:
/// x <= 1/2: 1/2 delta_{1+x} + 1/2 delta_2; x >= 1/2: 1/2 delta_{2-x} + 1/2 delta_2.
AtomicRow original_row(double x);

/// Augmentation of an atomic kernel on A = [0, 1]:
/// P~(x, .) = P(x, . cap A) + P(x, A^c) G(x, .).
AtomicRow augmented_row(const AtomicKernel& P, const AtomicKernel& G, double x);

/// The reinjection kernel G(x, .) = delta_{x/2}.
AtomicRow halving_row(double x);

/// Closed form of the augmented kernel:
/// x = 0: 1/2 delta_1 + 1/2 delta_0; 0 < x < 1: delta_{x/2};
/// x = 1: 1/2 delta_1 + 1/2 delta_{1/2}.
AtomicRow closed_form_row(double x);

/// True iff P~(0, .) = 1/2 delta_1 + 1/2 delta_0 both by construction and in
/// closed form, i.e. delta_0 is not invariant.
bool zero_row_is_not_delta0();

struct Trajectory {
  std::vector<Point> path;  ///< X_0 .. X_steps
  std::size_t atom_visits = 0;  ///< steps taken from the atoms 0 or 1
};

/// Exact simulation of the closed-form kernel from x0 in [0, 1].
Trajectory simulate(double x0, std::size_t steps, std::uint64_t seed);

struct TerminalSummary {
  std::size_t paths = 0;
  double mean_terminal = 0.0;
  /// Fraction of paths with X_steps <= epsilon.
  double mass_near_zero = 0.0;
  double epsilon = 0.0;
};

/// Terminal-law summary over independent paths (path k uses substream k).
TerminalSummary terminal_summary(double x0, std::size_t steps, std::size_t paths,
                                 std::uint64_t seed, double epsilon = 1e-6);

}  // namespace truncaug::example3

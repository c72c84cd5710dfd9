#include "truncaug/example3.hpp"

#include <algorithm>
#include <cmath>

#include "truncaug/error.hpp"
#include "truncaug/rng.hpp"

namespace truncaug::example3 {

namespace {

AtomicRow merged(AtomicRow row) {
  std::sort(row.begin(), row.end(),
            [](const Atom& a, const Atom& b) { return a.target < b.target; });
  AtomicRow out;
  for (const Atom& a : row) {
    if (!out.empty() && out.back().target == a.target) {
      out.back().prob += a.prob;
    } else if (a.prob > 0.0) {
      out.push_back(a);
    }
  }
  return out;
}

void check_in_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "point outside [0, 1]");
  }
}

}  // namespace

double Point::value() const {
  return std::ldexp(mantissa, -static_cast<int>(std::min<std::int64_t>(halvings, 1 << 20)));
}

AtomicRow original_row(double x) {
  if (!(x >= 0.0 && x <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "point outside [0, 2]");
  }
  if (x <= 0.5) return merged({{1.0 + x, 0.5}, {2.0, 0.5}});
  return merged({{2.0 - x, 0.5}, {2.0, 0.5}});
}

AtomicRow halving_row(double x) { return {{x / 2.0, 1.0}}; }

AtomicRow augmented_row(const AtomicKernel& P, const AtomicKernel& G, double x) {
  check_in_unit_interval(x);
  AtomicRow row;
  double exit = 0.0;
  for (const Atom& a : P(x)) {
    if (a.target >= 0.0 && a.target <= 1.0) {
      row.push_back(a);
    } else {
      exit += a.prob;
    }
  }
  if (exit > 0.0) {
    for (const Atom& a : G(x)) row.push_back({a.target, exit * a.prob});
  }
  return merged(std::move(row));
}

AtomicRow closed_form_row(double x) {
  check_in_unit_interval(x);
  if (x == 0.0) return {{0.0, 0.5}, {1.0, 0.5}};
  if (x == 1.0) return {{0.5, 0.5}, {1.0, 0.5}};
  return {{x / 2.0, 1.0}};
}

bool zero_row_is_not_delta0() {
  const AtomicRow built = augmented_row(original_row, halving_row, 0.0);
  const AtomicRow closed = closed_form_row(0.0);
  if (built.size() != closed.size()) return false;
  for (std::size_t k = 0; k < built.size(); ++k) {
    if (built[k].target != closed[k].target || built[k].prob != closed[k].prob) {
      return false;
    }
  }
  const bool is_delta0 = built.size() == 1 && built[0].target == 0.0;
  return !is_delta0;
}

namespace {

Trajectory simulate_stream(double x0, std::size_t steps, std::uint64_t seed,
                           std::uint64_t stream) {
  check_in_unit_interval(x0);
  std::mt19937_64 engine = substream(seed, stream);
  Trajectory out;
  Point x = Point::of(x0);
  out.path.reserve(steps + 1);
  out.path.push_back(x);
  for (std::size_t k = 0; k < steps; ++k) {
    if (x.is_zero()) {
      ++out.atom_visits;
      x = uniform01(engine) < 0.5 ? Point{0.0, 0} : Point{1.0, 0};
    } else if (x.is_one()) {
      ++out.atom_visits;
      x = uniform01(engine) < 0.5 ? Point{1.0, 0} : Point{1.0, 1};
    } else {
      ++x.halvings;
    }
    out.path.push_back(x);
  }
  return out;
}

}  // namespace

Trajectory simulate(double x0, std::size_t steps, std::uint64_t seed) {
  return simulate_stream(x0, steps, seed, 0);
}

TerminalSummary terminal_summary(double x0, std::size_t steps, std::size_t paths,
                                 std::uint64_t seed, double epsilon) {
  TerminalSummary out;
  out.paths = paths;
  out.epsilon = epsilon;
  if (paths == 0) return out;
  double total = 0.0;
  std::size_t near_zero = 0;
  for (std::size_t k = 0; k < paths; ++k) {
    const Trajectory t = simulate_stream(x0, steps, seed, k);
    const double v = t.path.back().value();
    total += v;
    if (v <= epsilon) ++near_zero;
  }
  out.mean_terminal = total / static_cast<double>(paths);
  out.mass_near_zero = static_cast<double>(near_zero) / static_cast<double>(paths);
  return out;
}

}  // namespace truncaug::example3

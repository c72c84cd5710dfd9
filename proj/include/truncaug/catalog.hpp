#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "truncaug/countable_chain.hpp"
#include "truncaug/distribution.hpp"
#include "truncaug/finite_matrix.hpp"
#include "truncaug/lyapunov.hpp"
#include "truncaug/regen.hpp"

namespace truncaug {

/// A catalog chain with whatever reference objects are known for it.
struct CatalogEntry {
  std::string name;
  std::optional<CountableChain> chain;
  std::optional<CountableRateChain> rate_chain;
  std::optional<LyapunovCertificate> certificate;
  /// Closed-form stationary mass, when known.
  std::optional<StateFunction> analytic_pi;
  /// Closed-form tail mass pi({x >= n}), used to account for the part of
  /// analytic_pi beyond a materialization window.
  std::optional<StateFunction> analytic_tail;
  /// Minorization valid for every row of the untruncated chain.
  std::optional<Minorization> minorization;
  std::string notes;
};

using CatalogParams = std::map<std::string, double>;

/// Default theta for the periodic-reset counterexample (e^{0.6} < 2).
inline constexpr double kExample1Theta = 0.4;

/// The periodic-reset chain: P(2i, 2i+1) = P(2i, 0) = 1/2 and
/// P(2i+1, 2i+2) = 1, with the exponential Lyapunov pair
/// g(2i) = e^{theta i}, g(2i+1) = e^{theta (i + 3/2)}, b = 1/2.
/// Requires theta > 0 and e^{1.5 theta} < 2.
CatalogEntry example1(double theta = kExample1Theta);

/// Family of finite chains on {0..n}: P(i, i-1) = 1 for i >= 1,
/// P(0, 0) = 1 - 1/(n+1), P(0, n) = 1/(n+1).
struct Example2 {
  FiniteStochastic matrix;
  Distribution pi;
};

/// Requires n >= 1.
Example2 example2(std::size_t n);
/// Closed-form pi_n(0) = (2 - 1/(n+1))^{-1}.
double example2_pi0(std::size_t n);

/// Reflected random walk: up with probability p, down (or stay at 0) with
/// 1 - p. Requires 0 < p < 1/2; pi is geometric with ratio p / (1 - p).
CatalogEntry birth_death(double p);

/// M/M/1 queue-length generator with arrival rate lam and service rate mu;
/// requires 0 < lam < mu. pi(i) = (1 - rho) rho^i, rho = lam / mu.
CatalogEntry mm1_rates(double lam, double mu);

/// Strongly uniformly recurrent chain: every row is
/// lam_floor * phi + (1 - lam_floor) * h(x), with phi uniform on {0, 1, 2}
/// and h a reflected walk moving up with probability `up`.
/// Requires lam_floor in (0, 1) and up in (0, 1).
CatalogEntry reset_chain(double lam_floor, double up = 0.5);

/// Upper-Hessenberg (skip-free to the left) chain: from x, move to
/// max(x - 1, 0) + A with A in {0, 1, 2} drawn with probabilities
/// (0.5, 0.3, 0.2); mean increment below one, so positive recurrent.
CatalogEntry hessenberg_demo();

/// Name lookup used by the CLI: example1 (theta), birth_death (p),
/// mm1_rates (lam, mu), reset_chain (lam_floor, up), hessenberg_demo.
/// Throws kInvalidArgument for unknown names or bad parameters.
CatalogEntry catalog(const std::string& name, const CatalogParams& params = {});
/// Every parameter of a catalog chain with its default value.
CatalogParams catalog_defaults(const std::string& name);

std::vector<std::string> catalog_names();

/// Analytic stationary law materialized on {0..size-1}; the mass beyond the
/// window is returned separately rather than dropped.
struct MaterializedReference {
  Distribution pi;
  double tail_mass;
};

MaterializedReference materialize_analytic(const CatalogEntry& entry, std::size_t size);

/// Exact total-variation distance from a finite distribution to the entry's
/// analytic pi on all of Z+, using the closed-form tail beyond supp(p).
double tv_to_analytic(const Distribution& p, const CatalogEntry& entry);

}  // namespace truncaug

#include "truncaug/catalog.hpp"

#include <cmath>
#include <string>

#include "truncaug/error.hpp"

namespace truncaug {

namespace {

double geometric_pi(double rho, StateIndex x) {
  return (1.0 - rho) * std::pow(rho, static_cast<double>(x));
}

}  // namespace

CatalogEntry example1(double theta) {
  if (!(theta > 0.0) || !(std::exp(1.5 * theta) < 2.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "example1 needs theta > 0 and e^{1.5 theta} < 2, got theta = " +
                    std::to_string(theta));
  }
  RowFunction rows = [](StateIndex x) -> std::vector<Transition> {
    if (x % 2 == 0) return {{0, 0.5}, {x + 1, 0.5}};
    return {{x + 1, 1.0}};
  };
  StateFunction pi = [](StateIndex x) {
    if (x == 0) return 1.0 / 3.0;
    const double k = static_cast<double>((x + 1) / 2);
    return std::exp2(-k) / 3.0;
  };
  StateFunction tail = [](StateIndex n) {
    if (n == 0) return 1.0;
    const double k = static_cast<double>((n + 1) / 2);
    return n % 2 == 0 ? std::exp2(-k) : (4.0 / 3.0) * std::exp2(-k);
  };
  const double c = std::exp(1.5 * theta);
  const double e = std::exp(theta);
  LyapunovCertificate cert;
  cert.g = [theta](StateIndex x) {
    const double i = static_cast<double>(x / 2);
    return x % 2 == 0 ? std::exp(theta * i) : std::exp(theta * (i + 1.5));
  };
  cert.r = [theta, c, e](StateIndex x) {
    const double i = static_cast<double>(x / 2);
    return x % 2 == 0 ? (1.0 - 0.5 * c) * std::exp(theta * i)
                      : (c - e) * std::exp(theta * i);
  };
  cert.b = 0.5;

  CatalogEntry entry;
  entry.name = "example1";
  entry.chain.emplace("example1", rows, pi, "theta=" + std::to_string(theta));
  entry.certificate = std::move(cert);
  entry.analytic_pi = pi;
  entry.analytic_tail = tail;
  entry.notes =
      "uniformly ergodic chain whose last-state augmentation over {0..n}, n odd, "
      "is absorbed at n";
  return entry;
}

double example2_pi0(std::size_t n) {
  return 1.0 / (2.0 - 1.0 / static_cast<double>(n + 1));
}

Example2 example2(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "example2 needs n >= 1");
  const double h = 1.0 / static_cast<double>(n + 1);
  std::vector<StateIndex> states(n + 1);
  std::vector<SparseRow> rows(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    states[i] = i;
    if (i == 0) {
      rows[0] = {{0, 1.0 - h}, {n, h}};
    } else {
      rows[i] = {{i - 1, 1.0}};
    }
  }
  std::vector<double> mass(n + 1);
  const double pi0 = example2_pi0(n);
  mass[0] = pi0;
  for (std::size_t i = 1; i <= n; ++i) mass[i] = h * pi0;
  return Example2{FiniteStochastic(states, std::move(rows)),
                  Distribution::from_weights(states, std::move(mass))};
}

CatalogEntry birth_death(double p) {
  if (!(p > 0.0 && p < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "birth_death needs 0 < p < 1/2");
  }
  const double q = 1.0 - p;
  const double rho = p / q;
  RowFunction rows = [p, q](StateIndex x) -> std::vector<Transition> {
    return {{x == 0 ? 0 : x - 1, q}, {x + 1, p}};
  };
  StateFunction pi = [rho](StateIndex x) { return geometric_pi(rho, x); };
  StateFunction tail = [rho](StateIndex n) {
    return std::pow(rho, static_cast<double>(n));
  };
  // g = z^x with z = sqrt(q/p) minimizing the drift factor p z + q / z.
  const double z = std::sqrt(q / p);
  const double factor = p * z + q / z;
  LyapunovCertificate cert;
  cert.g = [z](StateIndex x) { return std::pow(z, static_cast<double>(x)); };
  cert.r = [z, factor](StateIndex x) {
    return (1.0 - factor) * std::pow(z, static_cast<double>(x));
  };
  cert.b = q * (1.0 - 1.0 / z);

  CatalogEntry entry;
  entry.name = "birth_death";
  entry.chain.emplace("birth_death", rows, pi, "p=" + std::to_string(p));
  entry.certificate = std::move(cert);
  entry.analytic_pi = pi;
  entry.analytic_tail = tail;
  entry.notes = "stochastically monotone reflected walk";
  return entry;
}

CatalogEntry mm1_rates(double lam, double mu) {
  if (!(lam > 0.0 && mu > lam)) {
    throw Error(ErrorCode::kInvalidArgument, "mm1_rates needs 0 < lam < mu");
  }
  const double rho = lam / mu;
  RateRowFunction rows = [lam, mu](StateIndex x) -> std::vector<RateTransition> {
    if (x == 0) return {{1, lam}};
    return {{x - 1, mu}, {x + 1, lam}};
  };
  StateFunction pi = [rho](StateIndex x) { return geometric_pi(rho, x); };
  StateFunction tail = [rho](StateIndex n) {
    return std::pow(rho, static_cast<double>(n));
  };
  const double z = std::sqrt(mu / lam);
  const double drift = lam * (z - 1.0) + mu * (1.0 / z - 1.0);  // < 0
  LyapunovCertificate cert;
  cert.g = [z](StateIndex x) { return std::pow(z, static_cast<double>(x)); };
  cert.r = [z, drift](StateIndex x) {
    return -drift * std::pow(z, static_cast<double>(x));
  };
  cert.b = lam * (z - 1.0) - drift;

  CatalogEntry entry;
  entry.name = "mm1_rates";
  entry.rate_chain.emplace("mm1_rates", rows, pi,
                           "lam=" + std::to_string(lam) + " mu=" + std::to_string(mu));
  entry.certificate = std::move(cert);
  entry.analytic_pi = pi;
  entry.analytic_tail = tail;
  entry.notes = "birth-death generator";
  return entry;
}

CatalogEntry reset_chain(double lam_floor, double up) {
  if (!(lam_floor > 0.0 && lam_floor < 1.0) || !(up > 0.0 && up < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "reset_chain needs lam_floor in (0,1) and up in (0,1)");
  }
  const double third = 1.0 / 3.0;
  RowFunction rows = [lam_floor, up, third](StateIndex x) -> std::vector<Transition> {
    const double w = 1.0 - lam_floor;
    return {{0, lam_floor * third},
            {1, lam_floor * third},
            {2, lam_floor * third},
            {x + 1, w * up},
            {x == 0 ? 0 : x - 1, w * (1.0 - up)}};
  };
  CatalogEntry entry;
  entry.name = "reset_chain";
  entry.chain.emplace("reset_chain", rows, std::nullopt,
                      "lam_floor=" + std::to_string(lam_floor) +
                          " up=" + std::to_string(up));
  entry.minorization = Minorization{lam_floor, Distribution::uniform({0, 1, 2})};
  entry.notes = "rows dominate lam_floor * uniform{0,1,2}";
  return entry;
}

CatalogEntry hessenberg_demo() {
  static constexpr double kArrivals[3] = {0.5, 0.3, 0.2};
  RowFunction rows = [](StateIndex x) -> std::vector<Transition> {
    const StateIndex base = x == 0 ? 0 : x - 1;
    return {{base, kArrivals[0]}, {base + 1, kArrivals[1]}, {base + 2, kArrivals[2]}};
  };
  const double z = 1.2;
  const double factor = kArrivals[0] / z + kArrivals[1] + kArrivals[2] * z;
  const double pg0 = kArrivals[0] + kArrivals[1] * z + kArrivals[2] * z * z;
  LyapunovCertificate cert;
  cert.g = [z](StateIndex x) { return std::pow(z, static_cast<double>(x)); };
  cert.r = [z, factor](StateIndex x) {
    return (1.0 - factor) * std::pow(z, static_cast<double>(x));
  };
  cert.b = pg0 - 1.0 + (1.0 - factor);

  CatalogEntry entry;
  entry.name = "hessenberg_demo";
  entry.chain.emplace("hessenberg_demo", rows, std::nullopt, "arrivals=(0.5,0.3,0.2)");
  entry.certificate = std::move(cert);
  entry.notes = "upper-Hessenberg chain; last-state augmentation converges";
  return entry;
}

CatalogParams catalog_defaults(const std::string& name) {
  if (name == "example1") return {{"theta", kExample1Theta}};
  if (name == "birth_death") return {{"p", 0.3}};
  if (name == "mm1_rates") return {{"lam", 1.0}, {"mu", 2.0}};
  if (name == "reset_chain") return {{"lam_floor", 0.3}, {"up", 0.5}};
  if (name == "hessenberg_demo") return {};
  throw Error(ErrorCode::kInvalidArgument, "unknown catalog chain '" + name + "'");
}

CatalogEntry catalog(const std::string& name, const CatalogParams& params) {
  CatalogParams merged = catalog_defaults(name);
  for (const auto& [key, value] : params) {
    if (!merged.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "chain '" + name + "' has no parameter '" + key + "'");
    }
    merged[key] = value;
  }
  if (name == "example1") return example1(merged["theta"]);
  if (name == "birth_death") return birth_death(merged["p"]);
  if (name == "mm1_rates") return mm1_rates(merged["lam"], merged["mu"]);
  if (name == "reset_chain") return reset_chain(merged["lam_floor"], merged["up"]);
  return hessenberg_demo();
}

std::vector<std::string> catalog_names() {
  return {"example1", "birth_death", "mm1_rates", "reset_chain", "hessenberg_demo"};
}

MaterializedReference materialize_analytic(const CatalogEntry& entry, std::size_t size) {
  if (!entry.analytic_pi) {
    throw Error(ErrorCode::kInvalidArgument, entry.name + " has no analytic pi");
  }
  if (size < 1) throw Error(ErrorCode::kInvalidArgument, "size must be >= 1");
  std::vector<StateIndex> states(size);
  std::vector<double> mass(size);
  for (std::size_t x = 0; x < size; ++x) {
    states[x] = x;
    mass[x] = (*entry.analytic_pi)(x);
  }
  const double tail = entry.analytic_tail ? (*entry.analytic_tail)(size) : 0.0;
  return {Distribution::from_weights(std::move(states), std::move(mass)), tail};
}

double tv_to_analytic(const Distribution& p, const CatalogEntry& entry) {
  if (!entry.analytic_pi || !entry.analytic_tail) {
    throw Error(ErrorCode::kInvalidArgument,
                entry.name + " lacks an analytic pi with tail");
  }
  const StateIndex last = p.support().back();
  double l1 = 0.0;
  for (StateIndex x = 0; x <= last; ++x) {
    l1 += std::abs(p.at(x) - (*entry.analytic_pi)(x));
  }
  l1 += (*entry.analytic_tail)(last + 1);
  return 0.5 * l1;
}

}  // namespace truncaug

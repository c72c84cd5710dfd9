#include "truncaug/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "truncaug/error.hpp"

namespace truncaug {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

StateIndex parse_state(const std::string& s) {
  StateIndex value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, "bad state index '" + s + "'");
  }
  return value;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "bad number '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::kParse, "bad number '" + s + "'");
  return value;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw Error(ErrorCode::kParse, "expected header '" + header + "'");
  }
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "unformattable real");
  return std::string(buf, ptr);
}

void write_distribution_csv(std::ostream& out, const Distribution& pi) {
  out << "state,mass\n";
  for (std::size_t k = 0; k < pi.size(); ++k) {
    out << pi.support()[k] << ',' << format_real(pi.mass()[k]) << '\n';
  }
}

Distribution read_distribution_csv(std::istream& in) {
  expect_header(in, "state,mass");
  std::vector<StateIndex> support;
  std::vector<double> mass;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 2) throw Error(ErrorCode::kParse, "expected 2 columns: " + line);
    support.push_back(parse_state(cells[0]));
    mass.push_back(parse_real(cells[1]));
  }
  return Distribution(std::move(support), std::move(mass));
}

void write_truncation_set_csv(std::ostream& out, const TruncationSet& set) {
  out << "state\n";
  for (StateIndex x : set.states()) out << x << '\n';
}

TruncationSet read_truncation_set_csv(std::istream& in) {
  expect_header(in, "state");
  std::vector<StateIndex> states;
  std::string line;
  while (std::getline(in, line)) {
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    states.push_back(parse_state(cell));
  }
  return TruncationSet(std::move(states));
}

void write_augmented_csv(std::ostream& out, const AugmentedMatrix& augmented) {
  const FiniteStochastic& P = augmented.matrix;
  for (std::size_t j = 0; j < P.size(); ++j) {
    out << (j ? "," : "") << P.states()[j];
  }
  out << '\n';
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j < P.size(); ++j) {
      out << (j ? "," : "") << format_real(P.at(i, j));
    }
    out << '\n';
  }
}

void write_drift_csv(std::ostream& out, const DriftReport& report) {
  out << "state,Pg,g,r,slack\n";
  for (const DriftEntry& e : report.entries) {
    out << e.state << ',' << format_real(e.pg) << ',' << format_real(e.g) << ','
        << format_real(e.r) << ',' << format_real(e.slack) << '\n';
  }
}

void write_simulation_csv(std::ostream& out, const RegenerativeEstimate& est,
                          double p_decouple, double p_ci, double z) {
  out << "state,occupation_mean,occupation_ci\n";
  for (std::size_t k = 0; k < est.states.size(); ++k) {
    out << est.states[k] << ',' << format_real(est.occupation_mean[k]) << ','
        << format_real(z * est.occupation_stderr[k]) << '\n';
  }
  out << "\nscalar,value\n";
  out << "tau_mean," << format_real(est.tau_mean) << '\n';
  out << "p_decouple," << format_real(p_decouple) << '\n';
  out << "p_ci," << format_real(p_ci) << '\n';
}

}  // namespace truncaug

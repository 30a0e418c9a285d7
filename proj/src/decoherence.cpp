#include "qndsqueeze/decoherence.hpp"

#include <cmath>
#include <sstream>

#include "qndsqueeze/errors.hpp"
#include "qndsqueeze/numeric.hpp"

namespace qnd {

namespace {

void check_domain(double d, double eta) {
  if (!(d > 0.0)) throw DomainError("optical depth must be positive");
  if (!(eta >= 0.0) || !(eta < 1.0)) {
    std::ostringstream os;
    os << "scattering probability eta = " << eta << " outside [0, 1)";
    throw DomainError(os.str());
  }
}

}  // namespace

std::string to_string(Formula f) {
  switch (f) {
    case Formula::SingleD1: return "single-d1";
    case Formula::Cycling: return "cycling";
    case Formula::TwoColourD1: return "two-colour-d1";
  }
  return "?";
}

Formula formula_from_string(const std::string& s) {
  if (s == "single-d1") return Formula::SingleD1;
  if (s == "cycling") return Formula::Cycling;
  if (s == "two-colour-d1") return Formula::TwoColourD1;
  throw ConfigError("unknown formula '" + s + "' (expected single-d1, cycling or two-colour-d1)");
}

double ScatteringBudget::total() const {
  CompensatedSum s;
  for (const auto& [label, p] : channels) s.add(p);
  return s.value();
}

double ScatteringBudget::channel(const std::string& label) const {
  for (const auto& [name, p] : channels) {
    if (name == label) return p;
  }
  throw UsageError("no scattering channel '" + label + "'");
}

ScatteringBudget single_probe_budget(double eta) {
  if (!(eta >= 0.0)) throw DomainError("eta must be non-negative");
  ScatteringBudget b;
  b.scheme = "mz1";
  b.eta = eta;
  b.channels = {{"dc", eta / 3.0}, {"loss", 2.0 * eta / 3.0}};
  return b;
}

ScatteringBudget two_colour_budget(double eta) {
  if (!(eta >= 0.0)) throw DomainError("eta must be non-negative");
  ScatteringBudget b;
  b.scheme = "mz2";
  b.eta = eta;
  b.channels = {
      {"(3) 3,0", eta / 6.0},         {"(3) 3,+1", eta / 16.0},
      {"(3) 3,-1", eta / 16.0},       {"(3) 4,+1", 5.0 * eta / 48.0},
      {"(3) 4,-1", 5.0 * eta / 48.0}, {"(4) 4,0", eta / 6.0},
      {"(4) 4,+1", 5.0 * eta / 48.0}, {"(4) 4,-1", 5.0 * eta / 48.0},
      {"(4) 3,+1", eta / 16.0},       {"(4) 3,-1", eta / 16.0},
  };
  return b;
}

double xi_single_d1(double d, double eta) {
  check_domain(d, eta);
  const double kept = 1.0 - 2.0 * eta / 3.0;
  const double coherent = kept / (1.0 + 0.5 * d * eta);
  const double noise =
      4.0 / 3.0 * eta * kept * (1.0 - 0.75 * eta) / ((1.0 - eta) * (1.0 - eta));
  return coherent + noise;
}

double xi_two_colour_cycling(double d, double eta) {
  check_domain(d, eta);
  return 1.0 / ((1.0 - eta) * (1.0 - eta) * (1.0 + d * eta));
}

double xi_two_colour_d1(double d, double eta) {
  check_domain(d, eta);
  const double kept = 1.0 - 2.0 * eta / 3.0;
  const double shrink = (1.0 - eta) * (1.0 - eta);
  return kept * kept * kept / (shrink * (1.0 + d * eta)) + 2.0 / 3.0 * eta * kept * kept / shrink;
}

double xi_for(Formula f, double d, double eta) {
  switch (f) {
    case Formula::SingleD1: return xi_single_d1(d, eta);
    case Formula::Cycling: return xi_two_colour_cycling(d, eta);
    case Formula::TwoColourD1: return xi_two_colour_d1(d, eta);
  }
  throw UsageError("unknown formula");
}

double eta_opt_cycling(double d) {
  if (!(d > 0.0)) throw DomainError("optical depth must be positive");
  return d < 2.0 ? 0.0 : (d - 2.0) / (3.0 * d);
}

std::optional<double> xi2_asymptote(Formula f, double d) {
  switch (f) {
    case Formula::SingleD1: return std::sqrt(32.0 / (3.0 * d));
    case Formula::Cycling: return 27.0 / (4.0 * d);
    case Formula::TwoColourD1: return std::nullopt;
  }
  return std::nullopt;
}

Optimum optimize_eta(Formula f, double d) {
  if (!(d > 0.0)) throw DomainError("optical depth must be positive");
  auto xi = [&](double eta) { return xi_for(f, d, eta); };

  // Unimodality check on a coarse grid before trusting the bracket.
  constexpr int kScan = 64;
  const std::vector<double> grid = linspace(kEtaLower, kEtaUpper, kScan);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = xi(grid[i]);
  int minima = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const bool left = i == 0 || vals[i] < vals[i - 1];
    const bool right = i + 1 == vals.size() || vals[i] < vals[i + 1];
    if (left && right) ++minima;
  }
  if (minima != 1) {
    std::ostringstream os;
    os << to_string(f) << " at d = " << d << ": xi^2(eta) has " << minima
       << " local minima on the search interval";
    throw ComputationError(os.str());
  }
  const MinimumPoint m = golden_section_minimize(xi, kEtaLower, kEtaUpper, kEtaTolerance);
  return {m.x, m.fx};
}

std::vector<SweepRow> sweep_depth(Formula f, std::span<const double> d_grid) {
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    if (!(d_grid[i] > 0.0)) throw DomainError("depth grid must be strictly positive");
    if (i > 0 && !(d_grid[i] > d_grid[i - 1])) throw DomainError("depth grid must be increasing");
  }
  std::vector<SweepRow> rows;
  rows.reserve(d_grid.size());
  for (double d : d_grid) {
    const Optimum o = optimize_eta(f, d);
    rows.push_back({d, o.eta, o.xi2, xi2_asymptote(f, d)});
  }
  return rows;
}

double loglog_slope(std::span<const SweepRow> rows) {
  if (rows.size() < 2) throw DomainError("slope needs at least two rows");
  const double n = static_cast<double>(rows.size());
  CompensatedSum sx, sy, sxx, sxy;
  for (const auto& r : rows) {
    const double x = std::log(r.d);
    const double y = std::log(r.xi2_min);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double num = n * sxy.value() - sx.value() * sy.value();
  const double den = n * sxx.value() - sx.value() * sx.value();
  return num / den;
}

}  // namespace qnd

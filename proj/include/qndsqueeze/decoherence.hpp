#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qnd {

enum class Formula { SingleD1, Cycling, TwoColourD1 };

std::string to_string(Formula f);              // "single-d1" | "cycling" | "two-colour-d1"
Formula formula_from_string(const std::string& s);

/// Where the scattered atoms end up, as probabilities per channel.
struct ScatteringBudget {
  std::string scheme;
  double eta = 0.0;
  std::vector<std::pair<std::string, double>> channels;

  double total() const;  // compensated sum of the channel probabilities
  double channel(const std::string& label) const;
};

// Single probe on the D1 clock lines: loss to m = +-1 with 2 eta / 3,
// return to the original state with eta / 3.
ScatteringBudget single_probe_budget(double eta);

// Two-colour D1 probing, channels labelled "(k) f,m" for a photon of colour k
// leaving the atom in |f, m>.
ScatteringBudget two_colour_budget(double eta);

double xi_single_d1(double d, double eta);
double xi_two_colour_cycling(double d, double eta);
double xi_two_colour_d1(double d, double eta);
double xi_for(Formula f, double d, double eta);

// (d - 2) / (3 d), clamped at zero below d = 2.
double eta_opt_cycling(double d);

// Large-d reference for the optimized squeezing, when one exists:
// sqrt(32 / 3d) for single-d1 and 27 / (4d) for cycling.
std::optional<double> xi2_asymptote(Formula f, double d);

struct SqueezingResult {
  Formula formula = Formula::SingleD1;
  double d = 0.0;
  double eta = 0.0;
  double kappa_sq = 0.0;
  double xi2 = 0.0;
  std::optional<double> eta_opt;
  std::optional<double> asymptote;
};

inline constexpr double kEtaLower = 1e-6;
inline constexpr double kEtaUpper = 0.9;
inline constexpr double kEtaTolerance = 1e-8;

struct Optimum {
  double eta = 0.0;
  double xi2 = 0.0;
};

/// Minimizes xi^2(eta) over [1e-6, 0.9] by golden-section search. Throws
/// ComputationError when a coarse scan finds more than one local minimum.
Optimum optimize_eta(Formula f, double d);

struct SweepRow {
  double d = 0.0;
  double eta_opt = 0.0;
  double xi2_min = 0.0;
  std::optional<double> asymptote;
};

// Requires a strictly positive, increasing grid. Rows come back in grid order.
std::vector<SweepRow> sweep_depth(Formula f, std::span<const double> d_grid);

// Least-squares slope of log(xi2_min) against log(d).
double loglog_slope(std::span<const SweepRow> rows);

}  // namespace qnd

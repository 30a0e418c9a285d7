#pragma once

#include <string>
#include <vector>

namespace qnd {

// Largest problems the exact sums accept.
inline constexpr double kExactMaxAtoms = 200.0;
inline constexpr double kExactMaxPhotons = 1.0e4;
inline constexpr double kExactMaxPhase = 0.3;

/// Var S_y at the interferometer output, summed exactly over the binomial
/// F_z distribution of a coherent spin state. Given F_z = m the light stays a
/// coherent state with Stokes variance N_ph/4, rotated by -kappa m.
double exact_output_variance(double atom_number, double photon_number, double kappa_tilde);

/// Var i_- of the two-colour interferometer: two independent coherent fields
/// entering opposite ports, phase shifted by -kappa (N_at/2 -+ m).
/// `swap_roles` exchanges which colour enters which port.
double exact_two_colour_variance(double atom_number, double photons4, double kappa4,
                                 bool swap_roles = false);

struct PosteriorOptions {
  int outcome_points = 2001;
  double outcome_span_sigma = 6.0;
  double prior_span_sigma = 8.0;
};

struct PosteriorReport {
  double prior_variance = 0.0;
  double mean_posterior_variance = 0.0;  // averaged over the outcome marginal
  double max_posterior_variance = 0.0;   // largest over the outcome grid
  double marginal_mean = 0.0;
  double outcome_mass = 0.0;             // marginal probability captured by the grid
};

/// Bayes update of a binomial F_z prior from one balanced-detection outcome,
/// where the difference count given F_z = m is Skellam with means
/// (N_ph/2)(1 +- sin(kappa m)). Averages the posterior variance over the
/// outcome marginal on a trapezoidal outcome grid.
PosteriorReport posterior_conditional_variance(double atom_number, double photon_number,
                                               double kappa_tilde,
                                               const PosteriorOptions& opts = {});

// log of the Skellam pmf P(n1 - n2 = k), n1 ~ Poisson(mu1), n2 ~ Poisson(mu2).
double log_skellam_pmf(long k, double mu1, double mu2);

// kappa_tilde that gives kappa^2 = kappa_tilde^2 N_at N_ph / 4.
double kappa_tilde_for(double kappa_sq, double atom_number, double photon_number);

struct OracleCheck {
  std::string test;
  double formula_value = 0.0;
  double oracle_value = 0.0;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

OracleCheck make_check(std::string test, double formula, double oracle, double tolerance);

// The standard battery behind the `oracle-check` verb.
std::vector<OracleCheck> run_oracle_checks();

}  // namespace qnd

#include "qndsqueeze/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "qndsqueeze/atomic_model.hpp"
#include "qndsqueeze/errors.hpp"
#include "qndsqueeze/numeric.hpp"
#include "qndsqueeze/schemes.hpp"

namespace qnd {

namespace {

struct BinomialSupport {
  long n_lo = 0;
  long n_hi = 0;
  std::vector<double> log_p;  // log P(n), n = n_lo .. n_hi
  double half = 0.0;          // N/2, m = n - half
};

long as_count(double v, const char* what) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw DomainError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<long>(v);
}

// Binomial(N, 1/2) over n = number of atoms in the upper level.
BinomialSupport binomial_support(long n_atoms, double span_sigma) {
  BinomialSupport b;
  b.half = 0.5 * static_cast<double>(n_atoms);
  const double sigma = 0.5 * std::sqrt(static_cast<double>(n_atoms));
  const long reach = std::isfinite(span_sigma)
                         ? static_cast<long>(std::ceil(span_sigma * sigma)) + 1
                         : n_atoms;
  const long centre = n_atoms / 2;
  b.n_lo = std::max(0L, centre - reach);
  b.n_hi = std::min(n_atoms, centre + reach + 1);
  const double lg_n = std::lgamma(static_cast<double>(n_atoms) + 1.0);
  const double log2n = static_cast<double>(n_atoms) * std::log(2.0);
  for (long n = b.n_lo; n <= b.n_hi; ++n) {
    b.log_p.push_back(lg_n - std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(n_atoms - n) + 1.0) - log2n);
  }
  return b;
}

void check_exact_caps(double atom_number, double photon_number, double kappa_tilde) {
  if (atom_number > kExactMaxAtoms || photon_number > kExactMaxPhotons) {
    std::ostringstream os;
    os << "exact sum capped at N_at <= " << kExactMaxAtoms << ", N_ph <= " << kExactMaxPhotons;
    throw ResourceError(os.str());
  }
  if (!(std::abs(kappa_tilde) * atom_number < kExactMaxPhase)) {
    throw DomainError("exact oracle needs |kappa| N_at < 0.3");
  }
}

struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
};

double log_bessel_i_scaled(long order, double x) {
  static const GslQuiet quiet;
  gsl_sf_result r;
  const int status = order == 0 ? gsl_sf_bessel_I0_scaled_e(x, &r)
                                : gsl_sf_bessel_Inu_scaled_e(static_cast<double>(order), x, &r);
  if (status != GSL_SUCCESS || !(r.val > 0.0)) {
    std::ostringstream os;
    os << "scaled Bessel I_" << order << "(" << x << ") underflowed";
    throw ComputationError(os.str());
  }
  return std::log(r.val);
}

}  // namespace

double kappa_tilde_for(double kappa_sq, double atom_number, double photon_number) {
  if (!(kappa_sq >= 0.0) || !(atom_number > 0.0) || !(photon_number > 0.0)) {
    throw DomainError("kappa_tilde_for needs kappa^2 >= 0 and positive counts");
  }
  return 2.0 * std::sqrt(kappa_sq / (atom_number * photon_number));
}

double log_skellam_pmf(long k, double mu1, double mu2) {
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) throw DomainError("Skellam means must be positive");
  const double x = 2.0 * std::sqrt(mu1 * mu2);
  return -(mu1 + mu2) + 0.5 * static_cast<double>(k) * std::log(mu1 / mu2) + x +
         log_bessel_i_scaled(std::labs(k), x);
}

double exact_output_variance(double atom_number, double photon_number, double kappa_tilde) {
  check_exact_caps(atom_number, photon_number, kappa_tilde);
  const long n_at = as_count(atom_number, "atom number");
  const double half_ph = 0.5 * photon_number;
  if (n_at == 0) return photon_number / 4.0;
  const BinomialSupport b = binomial_support(n_at, std::numeric_limits<double>::infinity());
  CompensatedSum mean;
  CompensatedSum second;
  for (long n = b.n_lo; n <= b.n_hi; ++n) {
    const double p = std::exp(b.log_p[static_cast<std::size_t>(n - b.n_lo)]);
    const double m = static_cast<double>(n) - b.half;
    // light rotated by theta = -kappa m from <S_x> = N_ph/2
    const double sy = half_ph * std::sin(kappa_tilde * m);
    mean += p * sy;
    second += p * sy * sy;
  }
  return photon_number / 4.0 + second.value() - mean.value() * mean.value();
}

double exact_two_colour_variance(double atom_number, double photons4, double kappa4,
                                 bool swap_roles) {
  check_exact_caps(atom_number, photons4, kappa4);
  const long n_at = as_count(atom_number, "atom number");
  if (n_at == 0) return 2.0 * photons4;
  const double a = 0.5 * atom_number;
  const double half_ph = 0.5 * photons4;
  const BinomialSupport b = binomial_support(n_at, std::numeric_limits<double>::infinity());
  CompensatedSum mean;
  CompensatedSum second;
  for (long n = b.n_lo; n <= b.n_hi; ++n) {
    const double p = std::exp(b.log_p[static_cast<std::size_t>(n - b.n_lo)]);
    const double m = static_cast<double>(n) - b.half;
    // field 3: <S_x> = +N/2, theta3 = -kappa (a - m); field 4: <S_x> = -N/2, theta4 = -kappa (a + m)
    const double s3 = half_ph * std::sin(kappa4 * (a - m));
    const double s4 = -half_ph * std::sin(kappa4 * (a + m));
    const double sum = swap_roles ? -(s3 + s4) : s3 + s4;
    mean += p * sum;
    second += p * sum * sum;
  }
  const double var_means = second.value() - mean.value() * mean.value();
  // each coherent field keeps Stokes variance N/4; i_- = -2 (S3_y + S4_y)
  return 4.0 * (2.0 * photons4 / 4.0 + var_means);
}

PosteriorReport posterior_conditional_variance(double atom_number, double photon_number,
                                               double kappa_tilde, const PosteriorOptions& opts) {
  const long n_at = as_count(atom_number, "atom number");
  if (n_at == 0) throw DomainError("posterior needs atoms");
  if (!(photon_number > 0.0)) throw DomainError("posterior needs photons");
  if (opts.outcome_points < 3 || opts.outcome_points % 2 == 0) {
    throw DomainError("outcome grid needs an odd number (>= 3) of points");
  }
  const BinomialSupport b = binomial_support(n_at, opts.prior_span_sigma);
  const std::size_t nm = b.log_p.size();

  std::vector<double> m_val(nm);
  std::vector<double> mu1(nm);
  std::vector<double> mu2(nm);
  std::vector<double> prior(nm);
  {
    CompensatedSum z;
    for (std::size_t i = 0; i < nm; ++i) z += std::exp(b.log_p[i]);
    for (std::size_t i = 0; i < nm; ++i) {
      m_val[i] = static_cast<double>(b.n_lo + static_cast<long>(i)) - b.half;
      prior[i] = std::exp(b.log_p[i]) / z.value();
      const double s = std::sin(kappa_tilde * m_val[i]);
      mu1[i] = 0.5 * photon_number * (1.0 + s);
      mu2[i] = 0.5 * photon_number * (1.0 - s);
    }
  }
  PosteriorReport rep;
  {
    CompensatedSum m1, m2;
    for (std::size_t i = 0; i < nm; ++i) {
      m1 += prior[i] * m_val[i];
      m2 += prior[i] * m_val[i] * m_val[i];
    }
    rep.prior_variance = m2.value() - m1.value() * m1.value();
  }
  std::vector<double> log_prior(nm);
  for (std::size_t i = 0; i < nm; ++i) log_prior[i] = std::log(prior[i]);

  const double kappa_sq = kappa_squared(kappa_tilde, atom_number, photon_number);
  const double sigma_k = std::sqrt(photon_number * (1.0 + kappa_sq));
  const long half_points = (opts.outcome_points - 1) / 2;
  const long stride = std::max(
      1L, std::lround(opts.outcome_span_sigma * sigma_k / static_cast<double>(half_points)));

  CompensatedSum mass, mass_k, mass_var;
  std::vector<double> logw(nm);
  for (long j = -half_points; j <= half_points; ++j) {
    const long k = j * stride;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nm; ++i) {
      logw[i] = log_prior[i] + log_skellam_pmf(k, mu1[i], mu2[i]);
      top = std::max(top, logw[i]);
    }
    if (!std::isfinite(top)) throw ComputationError("posterior weights underflowed");
    CompensatedSum s0, s1;
    for (std::size_t i = 0; i < nm; ++i) {
      const double w = std::exp(logw[i] - top);
      s0 += w;
      s1 += w * m_val[i];
    }
    const double post_mean = s1.value() / s0.value();
    CompensatedSum s2;
    for (std::size_t i = 0; i < nm; ++i) {
      const double dm = m_val[i] - post_mean;
      s2 += std::exp(logw[i] - top) * dm * dm;
    }
    const double post_var = s2.value() / s0.value();
    rep.max_posterior_variance = std::max(rep.max_posterior_variance, post_var);

    const double trap = (j == -half_points || j == half_points) ? 0.5 : 1.0;
    const double p_k = std::exp(top) * s0.value() * trap * static_cast<double>(stride);
    mass += p_k;
    mass_k += p_k * static_cast<double>(k);
    mass_var += p_k * post_var;
  }
  rep.outcome_mass = mass.value();
  rep.marginal_mean = mass_k.value() / mass.value();
  rep.mean_posterior_variance = mass_var.value() / mass.value();
  return rep;
}

OracleCheck make_check(std::string test, double formula, double oracle, double tolerance) {
  OracleCheck c;
  c.test = std::move(test);
  c.formula_value = formula;
  c.oracle_value = oracle;
  c.relative_error = std::abs(oracle - formula) / std::abs(formula);
  c.tolerance = tolerance;
  c.pass = c.relative_error < tolerance;
  return c;
}

std::vector<OracleCheck> run_oracle_checks() {
  std::vector<OracleCheck> out;

  {
    const double n_at = 100.0;
    const double n_ph = 1.0e4;
    const double k2 = 0.25;
    const double kt = kappa_tilde_for(k2, n_at, n_ph);
    const double formula = n_ph / 4.0 * (1.0 + k2);
    out.push_back(make_check("output_variance", formula,
                             exact_output_variance(n_at, n_ph, kt), 1e-2));
    const double r_full = exact_output_variance(n_at, n_ph, kt) - formula;
    const double r_half =
        exact_output_variance(n_at, n_ph, kt / 2.0) -
        n_ph / 4.0 * (1.0 + kappa_squared(kt / 2.0, n_at, n_ph));
    out.push_back(make_check("output_variance_quartic_residual", 16.0, r_full / r_half, 0.3));
  }
  {
    const double n_at = 1.0e4;
    const double n_ph = 1.0e7;
    for (double k2 : {1.0, 3.0}) {
      const PosteriorReport rep =
          posterior_conditional_variance(n_at, n_ph, kappa_tilde_for(k2, n_at, n_ph));
      out.push_back(make_check(k2 == 1.0 ? "conditional_variance_kappa2_1"
                                         : "conditional_variance_kappa2_3",
                               conditional_variance(k2, n_at), rep.mean_posterior_variance,
                               k2 == 1.0 ? 0.02 : 0.03));
    }
  }
  {
    const double n_at = 100.0;
    const double n4 = 1.0e4;
    const double k2 = 0.25;
    const double kt = kappa_tilde_for(k2, n_at, n4);
    const double formula = 2.0 * n4 * (1.0 + 2.0 * k2 * (1.0 + n_at / (2.0 * n4)));
    out.push_back(make_check("two_colour_variance", formula,
                             exact_two_colour_variance(n_at, n4, kt), 1e-2));
  }
  return out;
}

}  // namespace qnd

#include "qndsqueeze/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qndsqueeze/errors.hpp"

namespace qnd {

namespace {

void require_scheme(const SchemeConfig& cfg, Scheme expected) {
  if (cfg.scheme != expected) {
    throw UsageError("scheme " + to_string(cfg.scheme) + " passed where " + to_string(expected) +
                     " is required");
  }
}

bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::SingleProbeMZ: return "mz1";
    case Scheme::TwoColourMZ: return "mz2";
    case Scheme::AmplitudeModulated: return "am";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "mz1") return Scheme::SingleProbeMZ;
  if (s == "mz2") return Scheme::TwoColourMZ;
  if (s == "am") return Scheme::AmplitudeModulated;
  throw ConfigError("unknown scheme '" + s + "' (expected mz1, mz2 or am)");
}

SchemeConfig single_probe_config(double detuning34, double photons, const TransitionLine& line,
                                 const BeamGeometry& geom) {
  SchemeConfig cfg;
  cfg.scheme = Scheme::SingleProbeMZ;
  cfg.photons4 = photons;
  cfg.detuning34 = detuning34;
  cfg.kappa4 = coupling_constant(detuning34, line, geom);
  return cfg;
}

SchemeConfig two_colour_config(double detuning43, double detuning34, double photons3,
                               double photons4, const TransitionLine& line,
                               const BeamGeometry& geom) {
  SchemeConfig cfg;
  cfg.scheme = Scheme::TwoColourMZ;
  cfg.photons3 = photons3;
  cfg.photons4 = photons4;
  cfg.detuning43 = detuning43;
  cfg.detuning34 = detuning34;
  cfg.kappa3 = coupling_constant(detuning43, line, geom);
  cfg.kappa4 = coupling_constant(detuning34, line, geom);
  return cfg;
}

SchemeConfig am_config(double sideband_offset3, double sideband_offset4, double photons3,
                       double photons4, const TransitionLine& line, const BeamGeometry& geom) {
  SchemeConfig cfg;
  cfg.scheme = Scheme::AmplitudeModulated;
  cfg.photons3 = photons3;
  cfg.photons4 = photons4;
  cfg.sideband_offset3 = sideband_offset3;
  cfg.sideband_offset4 = sideband_offset4;
  cfg.kappa3 = coupling_constant(0.5 * sideband_offset3, line, geom);
  cfg.kappa4 = coupling_constant(0.5 * sideband_offset4, line, geom);
  return cfg;
}

double am_balanced_photons4(const SchemeConfig& cfg) {
  if (cfg.kappa4 == 0.0) throw DomainError("kappa4 = 0 cannot balance the readout");
  return cfg.kappa3 * cfg.photons3 / cfg.kappa4;
}

CrossCoupling neglected_cross_coupling(double detuning43, double detuning34,
                                       const TransitionLine& line) {
  const int up = line.upper_f();
  const int low = line.lower_f();
  const double w3 = line.resonance(low, up) + detuning43;
  const double w4 = line.resonance(up, low) + detuning34;
  CrossCoupling c;
  c.field3_on_upper = std::abs(level_coupling(w3, up, line, 1.0) / level_coupling(w3, low, line, 1.0));
  c.field4_on_lower = std::abs(level_coupling(w4, low, line, 1.0) / level_coupling(w4, up, line, 1.0));
  return c;
}

SingleProbeAngles single_probe_angles(const SchemeConfig& cfg, const EnsembleConfig& ens) {
  require_scheme(cfg, Scheme::SingleProbeMZ);
  const double k = cfg.kappa4;
  const double n_ph = cfg.photons4;
  const double n_at = ens.atom_number;
  SingleProbeAngles a;
  a.atoms = RotationAngle::scalar(k * n_ph / 2.0);
  a.atoms.add_term("S_z", k, 0.0, n_ph / 4.0);
  a.light = RotationAngle::scalar(0.0);
  a.light.add_term("F_z", -k, 0.0, n_at / 4.0);
  return a;
}

DetectionResult single_probe_current(const SchemeConfig& cfg, const EnsembleConfig& ens) {
  const SingleProbeAngles angles = single_probe_angles(cfg, ens);
  const double n_ph = cfg.photons4;
  const MomentState out =
      output_beamsplitter(rotate_z(css_light(n_ph, +1), angles.light));
  DetectionResult r;
  r.mean = 2.0 * out.mean.z();
  r.variance = 4.0 * out.variance(2);
  r.kappa_sq = kappa_squared(cfg.kappa4, ens.atom_number, n_ph);
  r.closed_form_variance = n_ph * (1.0 + r.kappa_sq);
  r.shot_noise = n_ph;
  return r;
}

double conditional_variance(double kappa_sq, double atom_number) {
  if (!(kappa_sq >= 0.0)) throw DomainError("kappa^2 must be non-negative");
  return atom_number / 4.0 / (1.0 + kappa_sq);
}

double coherent_squeezing(double kappa_sq) {
  if (!(kappa_sq >= 0.0)) throw DomainError("kappa^2 must be non-negative");
  return 1.0 / (1.0 + kappa_sq);
}

TwoFieldAngles two_colour_angles(const SchemeConfig& cfg, const EnsembleConfig& ens) {
  require_scheme(cfg, Scheme::TwoColourMZ);
  if (!nearly_equal(cfg.kappa3, cfg.kappa4, 1e-12)) {
    throw DomainError("two-colour angles need Delta43 = Delta34 (kappa3 = kappa4)");
  }
  if (cfg.enforce_balance && cfg.photons3 != cfg.photons4) {
    throw DomainError("two-colour probing with balance enforced needs N_ph,3 = N_ph,4");
  }
  const double k = cfg.kappa4;
  const double n3 = cfg.photons3;
  const double n4 = cfg.photons4;
  const double n_at = ens.atom_number;
  TwoFieldAngles a;
  a.atoms = RotationAngle::scalar(k * (n4 - n3) / 2.0);
  a.atoms.add_term("S4_z", k, 0.0, n4 / 4.0);
  a.atoms.add_term("S3_z", -k, 0.0, n3 / 4.0);
  a.light3 = RotationAngle::scalar(-k * n_at / 2.0);
  a.light3.add_term("F_z", k, 0.0, n_at / 4.0);
  a.light4 = RotationAngle::scalar(-k * n_at / 2.0);
  a.light4.add_term("F_z", -k, 0.0, n_at / 4.0);
  return a;
}

namespace {

// Adds the first-order S_y' = S_y - theta S_x of one field to `sum`.
void add_field(LinearObservable& sum, const MomentState& field, const RotationAngle& theta,
               const std::string& name) {
  const double sx = field.mean.x();
  const double t = theta.mean();
  sum.mean += field.mean.y() - t * sx;
  sum.add(name + "_y", 1.0, field.variance(1));
  sum.add(name + "_x", -t, field.variance(0));
  for (std::size_t k = 0; k < theta.operators.size(); ++k) {
    sum.add(theta.operators[k], -sx * theta.coeff(static_cast<Eigen::Index>(k)),
            theta.input_cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
  }
}

}  // namespace

DetectionResult two_colour_current(const SchemeConfig& cfg, const EnsembleConfig& ens) {
  const TwoFieldAngles angles = two_colour_angles(cfg, ens);
  const double n4 = cfg.photons4;
  const double n_at = ens.atom_number;
  LinearObservable sum;
  add_field(sum, css_light(cfg.photons3, +1, "light3"), angles.light3, "S3");
  add_field(sum, css_light(n4, -1, "light4"), angles.light4, "S4");
  DetectionResult r;
  // i_- = -2 (S3_y + S4_y)
  r.mean = -2.0 * sum.mean;
  r.variance = 4.0 * sum.variance();
  r.kappa_sq = kappa_squared(cfg.kappa4, n_at, n4);
  r.atom_photon_ratio = n4 > 0.0 ? n_at / (2.0 * n4) : 0.0;
  r.closed_form_variance = 2.0 * n4 * (1.0 + 2.0 * r.kappa_sq * (1.0 + r.atom_photon_ratio));
  r.shot_noise = cfg.photons3 + n4;
  r.projection_noise_regime = n4 > 0.0 && n_at / n4 < kProjectionRegimeRatio;
  return r;
}

TwoFieldAngles am_angles(const SchemeConfig& cfg, const EnsembleConfig& ens) {
  require_scheme(cfg, Scheme::AmplitudeModulated);
  if (cfg.upper_fraction3 != 0.5 || cfg.upper_fraction4 != 0.5) {
    throw DomainError("unequal sideband powers break the light-shift cancellation");
  }
  // Angles carry the 4 kappa per unit that appears in the beat-note phase of
  // each sideband pair.
  const double k3 = 4.0 * cfg.kappa3;
  const double k4 = 4.0 * cfg.kappa4;
  const double n_at = ens.atom_number;
  TwoFieldAngles a;
  a.atoms = RotationAngle::scalar(0.0);
  a.atoms.add_term("S4_z", k4, 0.0, cfg.photons4 / 4.0);
  a.atoms.add_term("S3_z", -k3, 0.0, cfg.photons3 / 4.0);
  a.light3 = RotationAngle::scalar(k3 * n_at / 2.0);
  a.light3.add_term("F_z", -k3, 0.0, n_at / 4.0);
  a.light4 = RotationAngle::scalar(k4 * n_at / 2.0);
  a.light4.add_term("F_z", k4, 0.0, n_at / 4.0);
  return a;
}

double am_kappa_squared(const SchemeConfig& cfg, double atom_number) {
  return 4.0 *
         (cfg.kappa3 * cfg.kappa3 * cfg.photons3 + cfg.kappa4 * cfg.kappa4 * cfg.photons4) *
         atom_number;
}

double am_photocurrent(double t, const SchemeConfig& cfg, double atom_number, double fz) {
  const double n3 = cfg.photons3;
  const double n4 = cfg.photons4;
  return n3 + n4 +
         n3 * std::cos(cfg.sideband_offset3 * t + 4.0 * cfg.kappa3 * (atom_number / 2.0 - fz)) +
         n4 * std::cos(cfg.sideband_offset4 * t + 4.0 * cfg.kappa4 * (atom_number / 2.0 + fz));
}

DemodulatedPhases am_demodulated_phases(const SchemeConfig& cfg, double atom_number, double fz) {
  const double phi3 = 4.0 * cfg.kappa3 * (atom_number / 2.0 - fz);
  const double phi4 = 4.0 * cfg.kappa4 * (atom_number / 2.0 + fz);
  DemodulatedPhases p;
  p.theta3 = cfg.photons3 * std::sin(phi3);
  p.theta4 = cfg.photons4 * std::sin(phi4);
  p.theta3_linear = cfg.photons3 * phi3;
  p.theta4_linear = cfg.photons4 * phi4;
  return p;
}

DetectionResult am_phase_readout(const SchemeConfig& cfg, const EnsembleConfig& ens) {
  require_scheme(cfg, Scheme::AmplitudeModulated);
  const double k3 = cfg.kappa3;
  const double k4 = cfg.kappa4;
  const double n3 = cfg.photons3;
  const double n4 = cfg.photons4;
  const double n_at = ens.atom_number;
  if (!nearly_equal(k4 * n4, k3 * n3, 1e-9)) {
    throw DomainError("AM readout needs kappa4 N_ph,4 = kappa3 N_ph,3");
  }
  for (double k : {k3, k4}) {
    const double angle = std::abs(4.0 * k * n_at / 2.0);
    if (angle > kAmSmallAngleLimit) {
      std::ostringstream os;
      os << "AM demodulation angle " << angle << " rad exceeds the small-angle limit "
         << kAmSmallAngleLimit << " rad";
      throw ComputationError(os.str());
    }
  }
  // theta = 4 N4 k4 (N_at/2 + F_z) - 4 N3 k3 (N_at/2 - F_z), photon numbers fluctuating.
  LinearObservable theta;
  theta.mean = 2.0 * (k4 * n4 - k3 * n3) * n_at;
  theta.add("N_ph4", 2.0 * k4 * n_at, n4);
  theta.add("N_ph3", -2.0 * k3 * n_at, n3);
  theta.add("F_z", 4.0 * (k4 * n4 + k3 * n3), n_at / 4.0);
  DetectionResult r;
  r.mean = theta.mean;
  r.shot_noise = n3 + n4;
  r.variance = r.shot_noise + theta.variance();
  r.kappa_sq = am_kappa_squared(cfg, n_at);
  r.atom_photon_ratio = n4 > 0.0 ? n_at / (2.0 * n4) : 0.0;
  r.closed_form_variance = 2.0 * n4 * (1.0 + r.kappa_sq * (1.0 + r.atom_photon_ratio));
  r.projection_noise_regime = n4 > 0.0 && n_at / n4 < kProjectionRegimeRatio;
  return r;
}

}  // namespace qnd

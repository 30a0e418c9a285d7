#pragma once

#include <string>

#include "qndsqueeze/atomic_model.hpp"
#include "qndsqueeze/moments.hpp"

namespace qnd {

enum class Scheme { SingleProbeMZ, TwoColourMZ, AmplitudeModulated };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);  // "mz1" | "mz2" | "am"

/// Probe configuration shared by the three schemes.
///
/// Field 4 is the light near the |4> -> f'=3 line, field 3 the light near
/// |3> -> f'=4. The single-probe scheme uses only field 4 (photons4, kappa4).
struct SchemeConfig {
  Scheme scheme = Scheme::SingleProbeMZ;
  double photons3 = 0.0;
  double photons4 = 0.0;
  double kappa3 = 0.0;            // coupling constants (dimensionless)
  double kappa4 = 0.0;
  double detuning34 = 0.0;        // rad/s, reporting only once kappas are set
  double detuning43 = 0.0;
  double sideband_offset3 = 0.0;  // Omega_3, rad/s
  double sideband_offset4 = 0.0;
  // Fraction of each field's photons in its upper sideband.
  double upper_fraction3 = 0.5;
  double upper_fraction4 = 0.5;
  bool enforce_balance = true;
};

SchemeConfig single_probe_config(double detuning34, double photons, const TransitionLine& line,
                                 const BeamGeometry& geom);
SchemeConfig two_colour_config(double detuning43, double detuning34, double photons3,
                               double photons4, const TransitionLine& line,
                               const BeamGeometry& geom);
// Sidebands sit at +-Omega/2 about each resonance, so each pair couples with
// kappa(Omega/2).
SchemeConfig am_config(double sideband_offset3, double sideband_offset4, double photons3,
                       double photons4, const TransitionLine& line, const BeamGeometry& geom);

// Photon number that satisfies kappa4 N4 = kappa3 N3 given N3.
double am_balanced_photons4(const SchemeConfig& cfg);

/// Coupling of each two-colour field to the far ground level relative to its
/// near-resonant coupling. Reported only; never enters the variances.
struct CrossCoupling {
  double field3_on_upper = 0.0;
  double field4_on_lower = 0.0;
};
CrossCoupling neglected_cross_coupling(double detuning43, double detuning34,
                                       const TransitionLine& line);

struct SingleProbeAngles {
  RotationAngle atoms;
  RotationAngle light;
};

struct TwoFieldAngles {
  RotationAngle atoms;
  RotationAngle light3;
  RotationAngle light4;
};

struct DetectionResult {
  double mean = 0.0;
  double variance = 0.0;
  double closed_form_variance = 0.0;
  double kappa_sq = 0.0;
  double shot_noise = 0.0;
  // N_at / (2 N_ph,4); zero for the single probe.
  double atom_photon_ratio = 0.0;
  bool projection_noise_regime = true;
};

inline constexpr double kProjectionRegimeRatio = 0.01;
inline constexpr double kAmSmallAngleLimit = 0.1;

/// Single-probe angles. Both directions use the coupling kappa per unit of
/// the partner's operator:
///   theta_at = kappa (N_ph/2 + S_z),   theta_ph = -kappa F_z,
/// which makes the excess light noise equal kappa^2 = kappa^2 N_at N_ph / 4.
/// N_ph is held at its mean.
SingleProbeAngles single_probe_angles(const SchemeConfig& cfg, const EnsembleConfig& ens);

// Difference current 2 S_dz of the balanced interferometer, propagated from
// coherent inputs. variance = N_ph (1 + kappa^2).
DetectionResult single_probe_current(const SchemeConfig& cfg, const EnsembleConfig& ens);

// (N_at / 4) / (1 + kappa^2).
double conditional_variance(double kappa_sq, double atom_number);
// 1 / (1 + kappa^2).
double coherent_squeezing(double kappa_sq);

TwoFieldAngles two_colour_angles(const SchemeConfig& cfg, const EnsembleConfig& ens);

/// Two-colour difference current from the first-order expansion
/// S_y -> S_y - theta S_x of both fields. Field 3 enters with <S_x> = +N3/2,
/// field 4 through the other port with <S_x> = -N4/2.
DetectionResult two_colour_current(const SchemeConfig& cfg, const EnsembleConfig& ens);

TwoFieldAngles am_angles(const SchemeConfig& cfg, const EnsembleConfig& ens);

// kappa^2 = 4 (kappa3^2 N3 + kappa4^2 N4) N_at.
double am_kappa_squared(const SchemeConfig& cfg, double atom_number);

/// Mean photocurrent (photon units) at time t for a fixed F_z.
double am_photocurrent(double t, const SchemeConfig& cfg, double atom_number, double fz);

struct DemodulatedPhases {
  double theta3 = 0.0;         // N3 sin(4 kappa3 (N_at/2 - F_z))
  double theta4 = 0.0;
  double theta3_linear = 0.0;  // small-angle forms
  double theta4_linear = 0.0;
  double difference() const { return theta4 - theta3; }
  double difference_linear() const { return theta4_linear - theta3_linear; }
};
DemodulatedPhases am_demodulated_phases(const SchemeConfig& cfg, double atom_number, double fz);

/// Difference of the two demodulated phases with photon-number noise kept.
/// Requires kappa4 N4 = kappa3 N3 and |2 kappa N_at| <= 0.1 for both fields.
DetectionResult am_phase_readout(const SchemeConfig& cfg, const EnsembleConfig& ens);

}  // namespace qnd

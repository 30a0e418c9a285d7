#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json_fwd.hpp>

namespace qnd {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s

inline constexpr double mhz_to_angular(double mhz) { return kTwoPi * 1.0e6 * mhz; }
inline constexpr double angular_to_mhz(double w) { return w / (kTwoPi * 1.0e6); }

// Evaluations closer than this fraction of the linewidth to an allowed
// resonance are rejected.
inline constexpr double kPoleGuard = 1.0e-3;

/// Optical line between two hyperfine-split manifolds (alkali D1 layout:
/// ground f in {I-1/2, I+1/2}, excited f' in the same pair).
///
/// All frequencies are angular (rad/s). Level offsets are measured from the
/// hyperfine centroid of their manifold, so a transition frequency is quoted
/// relative to the line centroid.
struct TransitionLine {
  std::string version;
  double wavelength = 0.0;          // m
  double linewidth = 0.0;           // FWHM, rad/s
  double ground_splitting = 0.0;    // rad/s
  double excited_splitting = 0.0;   // rad/s
  double nuclear_spin = 3.5;

  // pi-polarized strength of |f, m=0> -> |f', m'=0>, normalized so that the
  // strengths out of one ground sublevel summed over every f' and
  // polarization equal 1. A closed two-level transition has strength 1.
  std::map<std::pair<int, int>, double> strength;

  // Strength of the clock lines |3,0> -> |4',0> and |4,0> -> |3',0>. The
  // coupling-constant prefactor lambda^2/(2 pi A) belongs to this strength.
  double clock_strength = 1.0 / 3.0;

  int lower_f() const;
  int upper_f() const;

  double ground_offset(int f) const;
  double excited_offset(int fp) const;

  // omega(f -> f') relative to the line centroid.
  double resonance(int f, int fp) const;

  // omega - omega(f -> f'); this is Delta_{f' f} in the usual labelling.
  double detuning(double omega, int f, int fp) const;

  double line_strength(int f, int fp) const;

  // sigma_0 = lambda^2 / 2 pi.
  double sigma0() const;

  // Throws DomainError on non-physical values.
  void validate() const;
};

struct BeamGeometry {
  double area = 0.0;                   // m^2
  std::optional<double> waist;         // m; area == pi w^2 when present
  double power = 0.0;                  // W
  double pulse_duration = 1.0e-6;      // s
  // Share of the probe photons that pass through the atoms. A balanced
  // Mach-Zehnder sends half of them down the reference arm.
  double atom_arm_fraction = 0.5;

  static BeamGeometry from_waist(double waist, double power = 0.0);
  static BeamGeometry from_area(double area, double power = 0.0);

  double intensity() const { return power / area; }
  void validate() const;
};

struct EnsembleConfig {
  double atom_number = 0.0;   // count
  double density = 0.0;       // m^-3
  double length = 0.0;        // m
  double area = 0.0;          // m^2

  // Builds from density, length and area. When atom_number is also given it
  // must agree with density*length*area to relative 1e-9.
  static EnsembleConfig from_density(double density, double length, double area,
                                     std::optional<double> atom_number = std::nullopt);

  double optical_depth(const TransitionLine& line) const;
  void validate() const;
};

TransitionLine cs_d1_line();
TransitionLine transition_line_from_json(const nlohmann::json& j);
TransitionLine load_transition_line(const std::string& path);
nlohmann::json transition_line_to_json(const TransitionLine& line);

// x / (1 + x^2) with x = 2 Delta / gamma.
double dispersion_profile(double detuning, double linewidth);

/// Dispersive coupling constant of one probe frequency with the clock line,
/// (lambda^2 / 2 pi A) x / (1 + x^2), x = 2 Delta / gamma.
double coupling_constant(double detuning, const TransitionLine& line, const BeamGeometry& geom);

/// Coupling of light at omega to population in ground level f, summed over
/// the excited levels with strengths relative to the clock line.
double level_coupling(double omega, int f, const TransitionLine& line, double area);

// Clock-line coupling as a function of absolute (centroid-relative) frequency,
// evaluated on the upper-ground-level line |4> -> f'=3.
double clock_coupling_at(double omega, const TransitionLine& line, double area);

/// Refractive index of a population-balanced probe point:
/// n = 1 - (lambda / 2 pi l) 2 <F_z> kappa(omega).
double refractive_index(double omega, const EnsembleConfig& ens, double mean_fz,
                        const TransitionLine& line);

/// Refractive index from the full two-level sum over both ground
/// populations N/2 +- <F_z>. Rejects frequencies on an allowed resonance.
double population_refractive_index(double omega, const EnsembleConfig& ens, double mean_fz,
                                   const TransitionLine& line);

// Frequency between the two resonance groups where equal populations in the
// two ground levels impart no net phase.
double zero_phase_frequency(const TransitionLine& line);

// Two-level saturation intensity 2 pi^2 hbar c gamma / (3 lambda^3), W/m^2.
double saturation_intensity(const TransitionLine& line);

// AC Stark shift of ground level |f, m=0> in rad/s.
double light_shift(double omega, int f, const TransitionLine& line, const BeamGeometry& geom);

/// Shift of the upper clock level minus that of the lower one (rad/s).
double differential_light_shift(double omega, const TransitionLine& line,
                                const BeamGeometry& geom);

/// Probability that an atom in a clock level scatters a probe photon during
/// the pulse, for N_ph photons at detuning Delta from its clock line.
double eta_from_geometry(double detuning, double photon_number, const TransitionLine& line,
                         const BeamGeometry& geom);

inline constexpr double kPerturbativeEtaLimit = 0.5;
inline bool eta_is_perturbative(double eta) { return eta <= kPerturbativeEtaLimit; }

// kappa^2 = kappa_tilde^2 N_at N_ph / 4.
double kappa_squared(double kappa_tilde, double atom_number, double photon_number);

}  // namespace qnd

#include "qndsqueeze/atomic_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <nlohmann/json.hpp>

#include "qndsqueeze/errors.hpp"

namespace qnd {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

// Rejects omega within kPoleGuard * gamma of any allowed line out of f.
void guard_poles(double omega, int f, const TransitionLine& line) {
  for (int fp : {line.lower_f(), line.upper_f()}) {
    if (line.line_strength(f, fp) <= 0.0) continue;
    if (std::abs(line.detuning(omega, f, fp)) < kPoleGuard * line.linewidth) {
      std::ostringstream os;
      os << "frequency " << angular_to_mhz(omega) << " MHz sits on the f=" << f << " -> f'=" << fp
         << " resonance";
      throw DomainError(os.str());
    }
  }
}

}  // namespace

int TransitionLine::lower_f() const { return static_cast<int>(std::lround(nuclear_spin - 0.5)); }
int TransitionLine::upper_f() const { return static_cast<int>(std::lround(nuclear_spin + 0.5)); }

// Hyperfine centroid weighting: the 2F+1 degeneracies balance about zero.
double TransitionLine::ground_offset(int f) const {
  const double g_up = 2.0 * upper_f() + 1.0;
  const double g_low = 2.0 * lower_f() + 1.0;
  if (f == upper_f()) return ground_splitting * g_low / (g_up + g_low);
  if (f == lower_f()) return -ground_splitting * g_up / (g_up + g_low);
  throw DomainError("unknown ground level f=" + std::to_string(f));
}

double TransitionLine::excited_offset(int fp) const {
  const double g_up = 2.0 * upper_f() + 1.0;
  const double g_low = 2.0 * lower_f() + 1.0;
  if (fp == upper_f()) return excited_splitting * g_low / (g_up + g_low);
  if (fp == lower_f()) return -excited_splitting * g_up / (g_up + g_low);
  throw DomainError("unknown excited level f'=" + std::to_string(fp));
}

double TransitionLine::resonance(int f, int fp) const {
  return excited_offset(fp) - ground_offset(f);
}

double TransitionLine::detuning(double omega, int f, int fp) const {
  return omega - resonance(f, fp);
}

double TransitionLine::line_strength(int f, int fp) const {
  auto it = strength.find({f, fp});
  return it == strength.end() ? 0.0 : it->second;
}

double TransitionLine::sigma0() const { return wavelength * wavelength / kTwoPi; }

void TransitionLine::validate() const {
  if (!(wavelength > 0.0) || !(linewidth > 0.0) || !(ground_splitting > 0.0) ||
      !(excited_splitting > 0.0)) {
    throw DomainError("transition line: wavelength, linewidth and splittings must be positive");
  }
  if (!(clock_strength > 0.0)) throw DomainError("transition line: clock strength must be positive");
  for (const auto& [key, s] : strength) {
    if (!(s >= 0.0) || s > 1.0) throw DomainError("transition line: strengths must lie in [0, 1]");
  }
  for (int f : {lower_f(), upper_f()}) {
    if (line_strength(f, lower_f()) + line_strength(f, upper_f()) > 1.0 + 1e-12) {
      throw DomainError("transition line: pi strengths out of one ground level exceed 1");
    }
  }
}

BeamGeometry BeamGeometry::from_waist(double waist, double power) {
  BeamGeometry g;
  g.waist = waist;
  g.area = kPi * waist * waist;
  g.power = power;
  g.validate();
  return g;
}

BeamGeometry BeamGeometry::from_area(double area, double power) {
  BeamGeometry g;
  g.area = area;
  g.power = power;
  g.validate();
  return g;
}

void BeamGeometry::validate() const {
  if (!(area > 0.0)) throw DomainError("beam area must be positive");
  if (!(pulse_duration > 0.0)) throw DomainError("pulse duration must be positive");
  if (!(power >= 0.0)) throw DomainError("optical power must be non-negative");
  if (!(atom_arm_fraction > 0.0 && atom_arm_fraction <= 1.0)) {
    throw DomainError("atom arm fraction must lie in (0, 1]");
  }
  if (waist) {
    const double expect = kPi * *waist * *waist;
    if (std::abs(area - expect) > 1e-12 * expect) {
      throw DomainError("beam area disagrees with pi w^2");
    }
  }
}

EnsembleConfig EnsembleConfig::from_density(double density, double length, double area,
                                            std::optional<double> atom_number) {
  EnsembleConfig e;
  e.density = density;
  e.length = length;
  e.area = area;
  e.atom_number = density * length * area;
  if (atom_number) {
    if (std::abs(*atom_number - e.atom_number) > 1e-9 * e.atom_number) {
      std::ostringstream os;
      os << "atom number " << *atom_number << " inconsistent with density*length*area = "
         << e.atom_number;
      throw ConfigError(os.str());
    }
    e.atom_number = *atom_number;
  }
  e.validate();
  return e;
}

double EnsembleConfig::optical_depth(const TransitionLine& line) const {
  return line.sigma0() * atom_number / area;
}

void EnsembleConfig::validate() const {
  if (!(atom_number > 0.0)) throw DomainError("ensemble needs a positive atom number");
  if (!(area > 0.0)) throw DomainError("ensemble area must be positive");
  if (!(length > 0.0)) throw DomainError("ensemble length must be positive");
}

TransitionLine cs_d1_line() {
  TransitionLine line;
  line.version = "cs-d1/1";
  line.wavelength = 894.59295986e-9;
  line.linewidth = mhz_to_angular(4.575);
  line.ground_splitting = mhz_to_angular(9192.631770);
  line.excited_splitting = mhz_to_angular(1167.680);
  line.nuclear_spin = 3.5;
  line.strength = {{{3, 3}, 0.0}, {{3, 4}, 1.0 / 3.0}, {{4, 3}, 1.0 / 3.0}, {{4, 4}, 0.0}};
  line.clock_strength = 1.0 / 3.0;
  return line;
}

TransitionLine transition_line_from_json(const nlohmann::json& j) {
  TransitionLine line = cs_d1_line();
  try {
    line.version = j.value("version", line.version);
    if (j.contains("wavelength_m")) line.wavelength = j.at("wavelength_m").get<double>();
    if (j.contains("linewidth_fwhm_mhz")) {
      line.linewidth = mhz_to_angular(j.at("linewidth_fwhm_mhz").get<double>());
    }
    if (j.contains("ground_hyperfine_splitting_mhz")) {
      line.ground_splitting = mhz_to_angular(j.at("ground_hyperfine_splitting_mhz").get<double>());
    }
    if (j.contains("excited_hyperfine_splitting_mhz")) {
      line.excited_splitting =
          mhz_to_angular(j.at("excited_hyperfine_splitting_mhz").get<double>());
    }
    line.nuclear_spin = j.value("nuclear_spin", line.nuclear_spin);
    line.clock_strength = j.value("clock_strength", line.clock_strength);
    for (int f : {line.lower_f(), line.upper_f()}) {
      for (int fp : {line.lower_f(), line.upper_f()}) {
        const std::string key = "strength_" + std::to_string(f) + "_" + std::to_string(fp);
        if (j.contains(key)) line.strength[{f, fp}] = j.at(key).get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("constants table: ") + e.what());
  }
  try {
    line.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return line;
}

TransitionLine load_transition_line(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open constants file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("constants file " + path + ": " + e.what());
  }
  return transition_line_from_json(j);
}

nlohmann::json transition_line_to_json(const TransitionLine& line) {
  nlohmann::json j;
  j["version"] = line.version;
  j["wavelength_m"] = line.wavelength;
  j["linewidth_fwhm_mhz"] = angular_to_mhz(line.linewidth);
  j["ground_hyperfine_splitting_mhz"] = angular_to_mhz(line.ground_splitting);
  j["excited_hyperfine_splitting_mhz"] = angular_to_mhz(line.excited_splitting);
  j["nuclear_spin"] = line.nuclear_spin;
  j["clock_strength"] = line.clock_strength;
  for (const auto& [key, s] : line.strength) {
    j["strength_" + std::to_string(key.first) + "_" + std::to_string(key.second)] = s;
  }
  return j;
}

double dispersion_profile(double detuning, double linewidth) {
  const double x = 2.0 * detuning / linewidth;
  return x / (1.0 + x * x);
}

double coupling_constant(double detuning, const TransitionLine& line, const BeamGeometry& geom) {
  require_finite(detuning, "detuning");
  if (!(geom.area > 0.0)) throw DomainError("beam area must be positive");
  if (!(line.linewidth > 0.0)) throw DomainError("linewidth must be positive");
  return line.sigma0() / geom.area * dispersion_profile(detuning, line.linewidth);
}

double level_coupling(double omega, int f, const TransitionLine& line, double area) {
  require_finite(omega, "frequency");
  double sum = 0.0;
  for (int fp : {line.lower_f(), line.upper_f()}) {
    const double s = line.line_strength(f, fp);
    if (s == 0.0) continue;
    sum += s / line.clock_strength * dispersion_profile(line.detuning(omega, f, fp), line.linewidth);
  }
  return line.sigma0() / area * sum;
}

double clock_coupling_at(double omega, const TransitionLine& line, double area) {
  require_finite(omega, "frequency");
  return line.sigma0() / area *
         dispersion_profile(line.detuning(omega, line.upper_f(), line.lower_f()), line.linewidth);
}

double refractive_index(double omega, const EnsembleConfig& ens, double mean_fz,
                        const TransitionLine& line) {
  if (!(ens.length > 0.0)) throw DomainError("ensemble length must be positive");
  const double kappa = clock_coupling_at(omega, line, ens.area);
  return 1.0 - line.wavelength / (kTwoPi * ens.length) * 2.0 * mean_fz * kappa;
}

double population_refractive_index(double omega, const EnsembleConfig& ens, double mean_fz,
                                   const TransitionLine& line) {
  if (!(ens.length > 0.0)) throw DomainError("ensemble length must be positive");
  const int f_up = line.upper_f();
  const int f_low = line.lower_f();
  guard_poles(omega, f_up, line);
  guard_poles(omega, f_low, line);
  const double n_up = 0.5 * ens.atom_number + mean_fz;
  const double n_low = 0.5 * ens.atom_number - mean_fz;
  const double phase = n_up * level_coupling(omega, f_up, line, ens.area) +
                       n_low * level_coupling(omega, f_low, line, ens.area);
  return 1.0 - line.wavelength / (kTwoPi * ens.length) * phase;
}

double zero_phase_frequency(const TransitionLine& line) {
  // Lines out of the upper ground level sit at lower optical frequency.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int fp : {line.lower_f(), line.upper_f()}) {
    if (line.line_strength(line.upper_f(), fp) > 0.0) {
      lo = std::max(lo, line.resonance(line.upper_f(), fp));
    }
    if (line.line_strength(line.lower_f(), fp) > 0.0) {
      hi = std::min(hi, line.resonance(line.lower_f(), fp));
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw ComputationError("no gap between the two resonance groups");
  }
  const double unit_area = 1.0;
  auto net = [&](double w) {
    return level_coupling(w, line.upper_f(), line, unit_area) +
           level_coupling(w, line.lower_f(), line, unit_area);
  };
  const double margin = line.linewidth;
  double a = lo + margin;
  double b = hi - margin;
  if (!(net(a) * net(b) < 0.0)) throw ComputationError("zero-phase point not bracketed");
  boost::uintmax_t iters = 200;
  auto tol = [&](double x, double y) { return std::abs(x - y) < 1e-9 * line.linewidth; };
  auto [r0, r1] = boost::math::tools::toms748_solve(net, a, b, tol, iters);
  return 0.5 * (r0 + r1);
}

double saturation_intensity(const TransitionLine& line) {
  const double l3 = line.wavelength * line.wavelength * line.wavelength;
  return 2.0 * kPi * kPi * kHbar * kSpeedOfLight * line.linewidth / (3.0 * l3);
}

double light_shift(double omega, int f, const TransitionLine& line, const BeamGeometry& geom) {
  require_finite(omega, "frequency");
  if (!(geom.power >= 0.0)) throw DomainError("optical power must be non-negative");
  guard_poles(omega, f, line);
  const double gamma = line.linewidth;
  // Rabi frequency squared of a strength-1 transition at this intensity.
  const double rabi_sq_unit = gamma * gamma * geom.intensity() / (2.0 * saturation_intensity(line));
  double shift = 0.0;
  for (int fp : {line.lower_f(), line.upper_f()}) {
    const double s = line.line_strength(f, fp);
    if (s == 0.0) continue;
    const double delta = line.detuning(omega, f, fp);
    shift += s * rabi_sq_unit * delta / (4.0 * delta * delta + gamma * gamma);
  }
  return shift;
}

double differential_light_shift(double omega, const TransitionLine& line,
                                const BeamGeometry& geom) {
  return light_shift(omega, line.upper_f(), line, geom) -
         light_shift(omega, line.lower_f(), line, geom);
}

double eta_from_geometry(double detuning, double photon_number, const TransitionLine& line,
                         const BeamGeometry& geom) {
  require_finite(detuning, "detuning");
  if (!(photon_number >= 0.0)) throw DomainError("photon number must be non-negative");
  geom.validate();
  const double x = 2.0 * detuning / line.linewidth;
  const double sigma_res = 3.0 * line.clock_strength * line.sigma0();
  return geom.atom_arm_fraction * photon_number * sigma_res / geom.area / (1.0 + x * x);
}

double kappa_squared(double kappa_tilde, double atom_number, double photon_number) {
  if (!(atom_number >= 0.0) || !(photon_number >= 0.0)) {
    throw DomainError("atom and photon numbers must be non-negative");
  }
  return 0.25 * kappa_tilde * kappa_tilde * atom_number * photon_number;
}

}  // namespace qnd

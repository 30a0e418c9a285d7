#include "qndsqueeze/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "qndsqueeze/errors.hpp"
#include "qndsqueeze/numeric.hpp"
#include "qndsqueeze/oracle.hpp"

namespace qnd {

namespace {

using ojson = nlohmann::ordered_json;

double number_at(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  return number_at(j, key);
}

const nlohmann::json& section(const Config& cfg, const std::string& key) {
  if (!cfg.doc.contains(key) || !cfg.doc.at(key).is_object()) {
    throw ConfigError("missing section '" + key + "'");
  }
  return cfg.doc.at(key);
}

std::string string_at(const nlohmann::json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
  return v.get<std::string>();
}

// JSON numbers must be finite; anything else becomes null.
ojson json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? 0.0 : v;
}

ojson json_number(const std::optional<double>& v) {
  return v ? json_number(*v) : ojson(nullptr);
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

Formula pick_formula(const Config& cfg, std::optional<Formula> flag, Formula fallback) {
  if (flag) return *flag;
  if (cfg.doc.contains("formula")) return formula_from_string(string_at(cfg.doc, "formula"));
  return fallback;
}

std::string eta_warning(double eta) {
  std::ostringstream os;
  os << "eta = " << format_number(eta) << " exceeds " << format_number(kPerturbativeEtaLimit)
     << "; the scattering budget is perturbative";
  return os.str();
}

}  // namespace

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  std::string base = std::filesystem::path(path).parent_path().string();
  return config_from_json(std::move(doc), base.empty() ? "." : base);
}

Config config_from_json(nlohmann::json doc, std::string base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  return {std::move(doc), std::move(base_dir)};
}

std::vector<double> grid_from_json(const nlohmann::json& j, const std::string& unit) {
  if (!j.is_object()) throw ConfigError("grid must be an object");
  std::vector<double> out;
  const std::string values_key = "values" + unit;
  if (j.contains(values_key)) {
    const auto& v = j.at(values_key);
    if (!v.is_array()) throw ConfigError("'" + values_key + "' must be an array");
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError("'" + values_key + "' must hold numbers");
      out.push_back(x.get<double>());
    }
  } else {
    const double start = number_at(j, "start" + unit);
    const double stop = number_at(j, "stop" + unit);
    const double points = number_at(j, "points");
    if (!(points >= 0.0) || points != std::floor(points)) {
      throw ConfigError("grid 'points' must be a non-negative integer");
    }
    const std::string spacing = j.contains("spacing") ? string_at(j, "spacing") : "linear";
    const auto n = static_cast<std::size_t>(points);
    if (spacing == "linear") {
      out = linspace(start, stop, n);
    } else if (spacing == "log") {
      if (!(start > 0.0) || !(stop > 0.0)) throw ConfigError("log grid needs positive endpoints");
      out = logspace(start, stop, n);
    } else {
      throw ConfigError("grid spacing must be 'linear' or 'log'");
    }
  }
  if (out.empty()) throw ConfigError("grid is empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw ConfigError("grid values must be finite");
    if (i > 0 && !(out[i] > out[i - 1])) throw ConfigError("grid must be strictly increasing");
  }
  return out;
}

TransitionLine line_from_config(const Config& cfg) {
  TransitionLine line = cs_d1_line();
  if (cfg.doc.contains("constants")) {
    std::filesystem::path p = string_at(cfg.doc, "constants");
    if (p.is_relative()) p = std::filesystem::path(cfg.base_dir) / p;
    line = load_transition_line(p.string());
  }
  line.validate();
  return line;
}

BeamGeometry beam_from_config(const Config& cfg) {
  const nlohmann::json& b = section(cfg, "beam");
  const double power = optional_number(b, "power_w").value_or(0.0);
  BeamGeometry g;
  if (auto w = optional_number(b, "waist_um")) {
    g = BeamGeometry::from_waist(*w * 1e-6, power);
  } else if (auto a = optional_number(b, "area_m2")) {
    g = BeamGeometry::from_area(*a, power);
  } else {
    throw ConfigError("beam needs 'waist_um' or 'area_m2'");
  }
  if (auto t = optional_number(b, "pulse_duration_s")) g.pulse_duration = *t;
  if (auto f = optional_number(b, "atom_arm_fraction")) g.atom_arm_fraction = *f;
  g.validate();
  return g;
}

EnsembleConfig ensemble_from_config(const Config& cfg, const TransitionLine& line,
                                    const BeamGeometry& beam) {
  const nlohmann::json& e = section(cfg, "ensemble");
  double length = 0.0;
  if (e.contains("length") && e.at("length").is_string()) {
    if (string_at(e, "length") != "twice_rayleigh") {
      throw ConfigError("ensemble 'length' must be a number in metres via 'length_m' or "
                        "the string 'twice_rayleigh'");
    }
    if (!beam.waist) throw ConfigError("'twice_rayleigh' needs the beam waist");
    length = 2.0 * kPi * *beam.waist * *beam.waist / line.wavelength;
  } else {
    length = number_at(e, "length_m");
  }
  const std::optional<double> atoms = optional_number(e, "atom_number");
  std::optional<double> density = optional_number(e, "density_m3");
  if (auto cm3 = optional_number(e, "density_cm3")) {
    if (density) throw ConfigError("give either 'density_m3' or 'density_cm3'");
    density = *cm3 * 1e6;
  }
  if (!density) {
    if (!atoms) throw ConfigError("ensemble needs a density or an atom number");
    density = *atoms / (length * beam.area);
  }
  EnsembleConfig ens = EnsembleConfig::from_density(*density, length, beam.area, atoms);
  ens.validate();
  return ens;
}

SqueezeReport compute_squeeze(const Config& cfg, std::optional<Scheme> scheme,
                              std::optional<Formula> formula) {
  SqueezeReport r;
  r.scheme = scheme ? *scheme
                    : scheme_from_string(cfg.doc.contains("scheme") ? string_at(cfg.doc, "scheme")
                                                                    : "mz1");
  r.formula = pick_formula(cfg, formula,
                           r.scheme == Scheme::SingleProbeMZ ? Formula::SingleD1
                                                             : Formula::TwoColourD1);
  const TransitionLine line = line_from_config(cfg);
  BeamGeometry beam = beam_from_config(cfg);
  const EnsembleConfig ens = ensemble_from_config(cfg, line, beam);
  const nlohmann::json& p = section(cfg, "probe");

  r.atom_number = ens.atom_number;
  r.d = ens.optical_depth(line);
  switch (r.scheme) {
    case Scheme::SingleProbeMZ: {
      const double photons = number_at(p, "photons");
      const double detuning = mhz_to_angular(number_at(p, "detuning_mhz"));
      const SchemeConfig sc = single_probe_config(detuning, photons, line, beam);
      r.eta = eta_from_geometry(detuning, photons, line, beam);
      r.kappa_sq = kappa_squared(sc.kappa4, ens.atom_number, photons);
      break;
    }
    case Scheme::TwoColourMZ: {
      const double n3 = number_at(p, "photons3");
      const double n4 = optional_number(p, "photons4").value_or(n3);
      const double d43 = mhz_to_angular(number_at(p, "detuning43_mhz"));
      const double d34 = mhz_to_angular(
          optional_number(p, "detuning34_mhz").value_or(angular_to_mhz(d43)));
      SchemeConfig sc = two_colour_config(d43, d34, n3, n4, line, beam);
      r.eta = eta_from_geometry(d34, n4, line, beam);
      r.kappa_sq = two_colour_current(sc, ens).kappa_sq;
      break;
    }
    case Scheme::AmplitudeModulated: {
      beam.atom_arm_fraction = 1.0;
      const double n3 = number_at(p, "photons3");
      const double o3 = mhz_to_angular(number_at(p, "sideband_offset3_mhz"));
      const double o4 = mhz_to_angular(
          optional_number(p, "sideband_offset4_mhz").value_or(angular_to_mhz(o3)));
      SchemeConfig sc = am_config(o3, o4, n3, 0.0, line, beam);
      sc.photons4 = optional_number(p, "photons4").value_or(am_balanced_photons4(sc));
      r.eta = eta_from_geometry(0.5 * o4, sc.photons4, line, beam);
      r.kappa_sq = am_kappa_squared(sc, ens.atom_number);
      break;
    }
  }
  if (auto eta = optional_number(cfg.doc, "eta_override")) {
    r.eta = *eta;
    r.eta_overridden = true;
  }
  r.kappa_sq_depth = 0.5 * r.d * r.eta;
  r.xi2 = xi_for(r.formula, r.d, r.eta);
  r.xi2_coherent = coherent_squeezing(r.kappa_sq);
  return r;
}

Report run_spectrum(const Config& cfg, OutputFormat fmt) {
  const TransitionLine line = line_from_config(cfg);
  const BeamGeometry beam = beam_from_config(cfg);
  const EnsembleConfig ens = ensemble_from_config(cfg, line, beam);
  const double mean_fz = optional_number(cfg.doc, "mean_fz").value_or(0.0);
  if (!cfg.doc.contains("grid")) throw ConfigError("missing section 'grid'");
  const std::vector<double> grid_mhz = grid_from_json(cfg.doc.at("grid"), "_mhz");

  struct Row {
    double freq_mhz;
    std::optional<double> index;
    std::optional<double> shift_hz;
  };
  std::vector<Row> rows;
  rows.reserve(grid_mhz.size());
  std::size_t poles = 0;
  for (double f : grid_mhz) {
    Row row{f, std::nullopt, std::nullopt};
    try {
      const double w = mhz_to_angular(f);
      const double n = population_refractive_index(w, ens, mean_fz, line);
      const double s = differential_light_shift(w, line, beam) / kTwoPi;
      row.index = n;
      row.shift_hz = s;
    } catch (const DomainError&) {
      ++poles;
    }
    rows.push_back(row);
  }

  // Sign changes of the light shift that are not a pole passing between grid points.
  std::vector<double> resonances;
  for (int f : {line.lower_f(), line.upper_f()}) {
    for (int fp : {line.lower_f(), line.upper_f()}) {
      if (line.line_strength(f, fp) > 0.0) resonances.push_back(line.resonance(f, fp));
    }
  }
  std::vector<double> shift_zeros;
  auto shift_at = [&](double w) { return differential_light_shift(w, line, beam); };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Row& a = rows[i - 1];
    const Row& b = rows[i];
    if (!a.shift_hz || !b.shift_hz || !(*a.shift_hz * *b.shift_hz < 0.0)) continue;
    const double wa = mhz_to_angular(a.freq_mhz);
    const double wb = mhz_to_angular(b.freq_mhz);
    bool pole_between = false;
    for (double r : resonances) pole_between = pole_between || (r > wa && r < wb);
    if (pole_between) continue;
    boost::uintmax_t iters = 200;
    auto tol = [&](double x, double y) { return std::abs(x - y) < 1e-9 * line.linewidth; };
    auto [r0, r1] = boost::math::tools::toms748_solve(shift_at, wa, wb, tol, iters);
    shift_zeros.push_back(angular_to_mhz(0.5 * (r0 + r1)));
  }

  Report rep;
  if (poles > 0) {
    rep.warnings.push_back(std::to_string(poles) + " grid point(s) on a resonance were marked");
  }
  const double zero_phase = angular_to_mhz(zero_phase_frequency(line));
  std::ostringstream os;
  if (fmt == OutputFormat::Csv) {
    os << "# zero_phase_mhz_rel=" << format_number(zero_phase) << "\n";
    os << "# light_shift_zero_mhz_rel=";
    if (shift_zeros.empty()) os << "none";
    for (std::size_t i = 0; i < shift_zeros.size(); ++i) {
      os << (i ? ";" : "") << format_number(shift_zeros[i]);
    }
    os << "\n";
    os << "freq_mhz_rel,n_refractive,light_shift_hz\n";
    for (const Row& r : rows) {
      os << format_number(r.freq_mhz) << ',';
      if (r.index) {
        os << format_number(*r.index) << ',' << format_number(*r.shift_hz) << "\n";
      } else {
        os << "pole,pole\n";
      }
    }
  } else {
    ojson head;
    head["zero_phase_mhz_rel"] = json_number(zero_phase);
    ojson zeros = ojson::array();
    for (double z : shift_zeros) zeros.push_back(json_number(z));
    head["light_shift_zero_mhz_rel"] = zeros;
    os << head.dump() << "\n";
    for (const Row& r : rows) {
      ojson o;
      o["freq_mhz_rel"] = json_number(r.freq_mhz);
      if (r.index) {
        o["n_refractive"] = json_number(*r.index);
        o["light_shift_hz"] = json_number(*r.shift_hz);
      } else {
        o["error"] = "pole";
      }
      os << o.dump() << "\n";
    }
  }
  rep.body = os.str();
  return rep;
}

Report run_squeeze(const Config& cfg, OutputFormat fmt, std::optional<Scheme> scheme,
                   std::optional<Formula> formula) {
  const SqueezeReport r = compute_squeeze(cfg, scheme, formula);
  Report rep;
  if (!eta_is_perturbative(r.eta)) rep.warnings.push_back(eta_warning(r.eta));
  std::ostringstream os;
  if (fmt == OutputFormat::Csv) {
    os << "scheme,formula,atom_number,d,eta,kappa_sq,kappa_sq_depth,xi2,xi2_coherent\n";
    os << to_string(r.scheme) << ',' << to_string(r.formula) << ',' << format_number(r.atom_number)
       << ',' << format_number(r.d) << ',' << format_number(r.eta) << ','
       << format_number(r.kappa_sq) << ',' << format_number(r.kappa_sq_depth) << ','
       << format_number(r.xi2) << ',' << format_number(r.xi2_coherent) << "\n";
  } else {
    ojson o;
    o["scheme"] = to_string(r.scheme);
    o["formula"] = to_string(r.formula);
    o["atom_number"] = json_number(r.atom_number);
    o["d"] = json_number(r.d);
    o["eta"] = json_number(r.eta);
    o["eta_overridden"] = r.eta_overridden;
    o["kappa_sq"] = json_number(r.kappa_sq);
    o["kappa_sq_depth"] = json_number(r.kappa_sq_depth);
    o["xi2"] = json_number(r.xi2);
    o["xi2_coherent"] = json_number(r.xi2_coherent);
    os << o.dump() << "\n";
  }
  rep.body = os.str();
  return rep;
}

Report run_sweep(const Config& cfg, OutputFormat fmt, std::optional<Formula> formula) {
  const Formula f = pick_formula(cfg, formula, Formula::SingleD1);
  if (!cfg.doc.contains("d_grid")) throw ConfigError("missing section 'd_grid'");
  const std::vector<double> grid = grid_from_json(cfg.doc.at("d_grid"));
  const std::vector<SweepRow> rows = sweep_depth(f, grid);
  Report rep;
  std::ostringstream os;
  if (fmt == OutputFormat::Csv) {
    os << "d,eta_opt,xi2_min,xi2_asymptote,formula_id\n";
    for (const SweepRow& r : rows) {
      os << format_number(r.d) << ',' << format_number(r.eta_opt) << ','
         << format_number(r.xi2_min) << ',' << csv_optional(r.asymptote) << ',' << to_string(f)
         << "\n";
    }
  } else {
    for (const SweepRow& r : rows) {
      ojson o;
      o["d"] = json_number(r.d);
      o["eta_opt"] = json_number(r.eta_opt);
      o["xi2_min"] = json_number(r.xi2_min);
      o["xi2_asymptote"] = json_number(r.asymptote);
      o["formula_id"] = to_string(f);
      os << o.dump() << "\n";
    }
  }
  for (const SweepRow& r : rows) {
    if (!eta_is_perturbative(r.eta_opt)) {
      rep.warnings.push_back("d = " + format_number(r.d) + ": " + eta_warning(r.eta_opt));
    }
  }
  rep.body = os.str();
  return rep;
}

Report run_optimize(const Config& cfg, OutputFormat fmt, std::optional<Formula> formula) {
  const Formula f = pick_formula(cfg, formula, Formula::SingleD1);
  double d = 0.0;
  if (auto v = optional_number(cfg.doc, "d")) {
    d = *v;
  } else {
    const TransitionLine line = line_from_config(cfg);
    const BeamGeometry beam = beam_from_config(cfg);
    d = ensemble_from_config(cfg, line, beam).optical_depth(line);
  }
  if (!(d > 0.0)) throw ConfigError("optical depth must be positive");
  const Optimum o = optimize_eta(f, d);
  const std::optional<double> asym = xi2_asymptote(f, d);
  std::optional<double> closed;
  if (f == Formula::Cycling) closed = eta_opt_cycling(d);
  Report rep;
  if (!eta_is_perturbative(o.eta)) rep.warnings.push_back(eta_warning(o.eta));
  std::ostringstream os;
  if (fmt == OutputFormat::Csv) {
    os << "formula,d,eta_opt,xi2_min,xi2_asymptote,eta_opt_closed_form\n";
    os << to_string(f) << ',' << format_number(d) << ',' << format_number(o.eta) << ','
       << format_number(o.xi2) << ',' << csv_optional(asym) << ',' << csv_optional(closed) << "\n";
  } else {
    ojson j;
    j["formula"] = to_string(f);
    j["d"] = json_number(d);
    j["eta_opt"] = json_number(o.eta);
    j["xi2_min"] = json_number(o.xi2);
    j["xi2_asymptote"] = json_number(asym);
    j["eta_opt_closed_form"] = json_number(closed);
    os << j.dump() << "\n";
  }
  rep.body = os.str();
  return rep;
}

Report run_oracle_check(OutputFormat fmt) {
  const std::vector<OracleCheck> checks = run_oracle_checks();
  Report rep;
  std::ostringstream os;
  if (fmt == OutputFormat::Csv) {
    os << "test,formula_value,oracle_value,relative_error,tolerance,pass\n";
    for (const OracleCheck& c : checks) {
      os << c.test << ',' << format_number(c.formula_value) << ','
         << format_number(c.oracle_value) << ',' << format_number(c.relative_error) << ','
         << format_number(c.tolerance) << ',' << (c.pass ? "true" : "false") << "\n";
    }
  } else {
    for (const OracleCheck& c : checks) {
      ojson o;
      o["test"] = c.test;
      o["formula_value"] = json_number(c.formula_value);
      o["oracle_value"] = json_number(c.oracle_value);
      o["relative_error"] = json_number(c.relative_error);
      o["tolerance"] = json_number(c.tolerance);
      o["pass"] = c.pass;
      os << o.dump() << "\n";
    }
  }
  for (const OracleCheck& c : checks) {
    if (!c.pass) {
      rep.warnings.push_back("oracle check '" + c.test + "' failed");
      rep.exit_code = kExitComputation;
    }
  }
  rep.body = os.str();
  return rep;
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    Report rep;
    const bool needs_config = opts.verb != "oracle-check";
    if (needs_config && opts.config_path.empty()) {
      throw ConfigError("verb '" + opts.verb + "' needs --config");
    }
    const Config cfg = needs_config ? load_config(opts.config_path) : Config{};
    if (opts.verb == "spectrum") {
      rep = run_spectrum(cfg, opts.format.value_or(OutputFormat::Csv));
    } else if (opts.verb == "squeeze") {
      rep = run_squeeze(cfg, opts.format.value_or(OutputFormat::Json), opts.scheme, opts.formula);
    } else if (opts.verb == "sweep") {
      rep = run_sweep(cfg, opts.format.value_or(OutputFormat::Csv), opts.formula);
    } else if (opts.verb == "optimize") {
      rep = run_optimize(cfg, opts.format.value_or(OutputFormat::Json), opts.formula);
    } else if (opts.verb == "oracle-check") {
      rep = run_oracle_check(opts.format.value_or(OutputFormat::Json));
    } else {
      throw ConfigError("unknown verb '" + opts.verb + "'");
    }
    for (const std::string& w : rep.warnings) err << "warning: " << w << "\n";
    if (opts.out_path) {
      std::ofstream f(*opts.out_path, std::ios::binary | std::ios::trunc);
      if (!f) throw ConfigError("cannot write '" + *opts.out_path + "'");
      f << rep.body;
      if (!f) throw ComputationError("write to '" + *opts.out_path + "' failed");
    } else {
      out << rep.body;
      out.flush();
    }
    return rep.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace qnd

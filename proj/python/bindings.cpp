#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qndsqueeze/atomic_model.hpp"
#include "qndsqueeze/cli.hpp"
#include "qndsqueeze/decoherence.hpp"
#include "qndsqueeze/errors.hpp"
#include "qndsqueeze/oracle.hpp"
#include "qndsqueeze/schemes.hpp"

namespace py = pybind11;
using namespace qnd;

namespace {

std::optional<Scheme> maybe_scheme(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return scheme_from_string(*s);
}

std::optional<Formula> maybe_formula(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return formula_from_string(*s);
}

py::dict budget_dict(const ScatteringBudget& b) {
  py::dict channels;
  for (const auto& [label, p] : b.channels) channels[py::str(label)] = p;
  py::dict d;
  d["scheme"] = b.scheme;
  d["eta"] = b.eta;
  d["channels"] = channels;
  d["total"] = b.total();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Squeezing estimates for dispersive measurements on the Cs clock transition";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_TypeError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<ComputationError>(m, "ComputationError", PyExc_ArithmeticError);

  m.def("xi_single_d1", &xi_single_d1, py::arg("d"), py::arg("eta"));
  m.def("xi_two_colour_cycling", &xi_two_colour_cycling, py::arg("d"), py::arg("eta"));
  m.def("xi_two_colour_d1", &xi_two_colour_d1, py::arg("d"), py::arg("eta"));
  m.def(
      "xi2", [](const std::string& formula, double d, double eta) {
        return xi_for(formula_from_string(formula), d, eta);
      },
      py::arg("formula"), py::arg("d"), py::arg("eta"));
  m.def("eta_opt_cycling", &eta_opt_cycling, py::arg("d"));
  m.def(
      "optimize_eta",
      [](const std::string& formula, double d) {
        const Optimum o = optimize_eta(formula_from_string(formula), d);
        return py::make_tuple(o.eta, o.xi2);
      },
      py::arg("formula"), py::arg("d"), "Returns (eta_opt, xi2_min).");
  m.def(
      "sweep",
      [](const std::string& formula, const std::vector<double>& d_grid) {
        py::list rows;
        for (const SweepRow& r : sweep_depth(formula_from_string(formula), d_grid)) {
          rows.append(py::make_tuple(r.d, r.eta_opt, r.xi2_min));
        }
        return rows;
      },
      py::arg("formula"), py::arg("d_grid"), "Returns a list of (d, eta_opt, xi2_min).");

  m.def("single_probe_budget", [](double eta) { return budget_dict(single_probe_budget(eta)); },
        py::arg("eta"));
  m.def("two_colour_budget", [](double eta) { return budget_dict(two_colour_budget(eta)); },
        py::arg("eta"));

  m.def("mhz_to_angular", &mhz_to_angular, py::arg("mhz"));
  m.def("angular_to_mhz", &angular_to_mhz, py::arg("omega"));
  m.def(
      "coupling_constant",
      [](double detuning_mhz, double waist_m) {
        return coupling_constant(mhz_to_angular(detuning_mhz), cs_d1_line(),
                                 BeamGeometry::from_waist(waist_m));
      },
      py::arg("detuning_mhz"), py::arg("waist_m"));
  m.def(
      "eta_from_geometry",
      [](double detuning_mhz, double photon_number, double waist_m, double atom_arm_fraction) {
        BeamGeometry g = BeamGeometry::from_waist(waist_m);
        g.atom_arm_fraction = atom_arm_fraction;
        return eta_from_geometry(mhz_to_angular(detuning_mhz), photon_number, cs_d1_line(), g);
      },
      py::arg("detuning_mhz"), py::arg("photon_number"), py::arg("waist_m"),
      py::arg("atom_arm_fraction") = 0.5);
  m.def("zero_phase_mhz", [] { return angular_to_mhz(zero_phase_frequency(cs_d1_line())); });
  m.def("kappa_squared", &kappa_squared, py::arg("kappa_tilde"), py::arg("atom_number"),
        py::arg("photon_number"));
  m.def("kappa_tilde_for", &kappa_tilde_for, py::arg("kappa_sq"), py::arg("atom_number"),
        py::arg("photon_number"));
  m.def("conditional_variance", &conditional_variance, py::arg("kappa_sq"), py::arg("atom_number"));

  m.def("exact_output_variance", &exact_output_variance, py::arg("atom_number"),
        py::arg("photon_number"), py::arg("kappa_tilde"));
  m.def(
      "exact_two_colour_variance",
      [](double n_at, double n4, double k) { return exact_two_colour_variance(n_at, n4, k); },
      py::arg("atom_number"), py::arg("photons4"), py::arg("kappa_tilde"));
  m.def(
      "posterior_conditional_variance",
      [](double n_at, double n_ph, double k) {
        const PosteriorReport r = posterior_conditional_variance(n_at, n_ph, k);
        py::dict d;
        d["prior_variance"] = r.prior_variance;
        d["mean_posterior_variance"] = r.mean_posterior_variance;
        d["max_posterior_variance"] = r.max_posterior_variance;
        d["marginal_mean"] = r.marginal_mean;
        d["outcome_mass"] = r.outcome_mass;
        return d;
      },
      py::arg("atom_number"), py::arg("photon_number"), py::arg("kappa_tilde"));
  m.def("oracle_checks", [] {
    py::list out;
    for (const OracleCheck& c : run_oracle_checks()) {
      py::dict d;
      d["test"] = c.test;
      d["formula_value"] = c.formula_value;
      d["oracle_value"] = c.oracle_value;
      d["relative_error"] = c.relative_error;
      d["tolerance"] = c.tolerance;
      d["pass"] = c.pass;
      out.append(d);
    }
    return out;
  });

  m.def(
      "_compute_squeeze",
      [](const std::string& config_json, const std::string& base_dir,
         const std::optional<std::string>& scheme, const std::optional<std::string>& formula) {
        const Config cfg = config_from_json(nlohmann::json::parse(config_json), base_dir);
        const SqueezeReport r = compute_squeeze(cfg, maybe_scheme(scheme), maybe_formula(formula));
        py::dict d;
        d["scheme"] = to_string(r.scheme);
        d["formula"] = to_string(r.formula);
        d["atom_number"] = r.atom_number;
        d["d"] = r.d;
        d["eta"] = r.eta;
        d["kappa_sq"] = r.kappa_sq;
        d["kappa_sq_depth"] = r.kappa_sq_depth;
        d["xi2"] = r.xi2;
        d["xi2_coherent"] = r.xi2_coherent;
        d["eta_overridden"] = r.eta_overridden;
        return d;
      },
      py::arg("config_json"), py::arg("base_dir"), py::arg("scheme") = py::none(),
      py::arg("formula") = py::none());
}

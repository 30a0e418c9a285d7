#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qndsqueeze/atomic_model.hpp"
#include "qndsqueeze/decoherence.hpp"
#include "qndsqueeze/schemes.hpp"

namespace qnd {

enum class OutputFormat { Csv, Json };

OutputFormat format_from_string(const std::string& s);  // "csv" | "json"

// printf %.10g, the CSV number format.
std::string format_number(double v);

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
  std::string verb;
  std::string config_path;  // may be empty for oracle-check
  std::optional<std::string> out_path;
  std::optional<OutputFormat> format;
  std::optional<Formula> formula;
  std::optional<Scheme> scheme;
};

struct Report {
  std::string body;
  std::vector<std::string> warnings;
  int exit_code = 0;  // nonzero when the report itself records a failure
};

/// Parsed config plus the directory relative paths inside it resolve against.
struct Config {
  nlohmann::json doc;
  std::string base_dir;
};

Config load_config(const std::string& path);
Config config_from_json(nlohmann::json doc, std::string base_dir = ".");

/// Frequency or depth grid. Either explicit `values`, or `start`/`stop`/
/// `points` with `spacing` "linear" (default) or "log". The key suffix
/// (e.g. "_mhz") is passed in `unit`.
std::vector<double> grid_from_json(const nlohmann::json& j, const std::string& unit = "");

TransitionLine line_from_config(const Config& cfg);
BeamGeometry beam_from_config(const Config& cfg);
EnsembleConfig ensemble_from_config(const Config& cfg, const TransitionLine& line,
                                    const BeamGeometry& beam);

struct SqueezeReport {
  Scheme scheme = Scheme::SingleProbeMZ;
  Formula formula = Formula::SingleD1;
  double atom_number = 0.0;
  double d = 0.0;
  double eta = 0.0;
  double kappa_sq = 0.0;      // from the coupling constants
  double kappa_sq_depth = 0.0;  // d eta / 2
  double xi2 = 0.0;
  double xi2_coherent = 0.0;  // 1 / (1 + kappa^2), no decoherence
  bool eta_overridden = false;
};

SqueezeReport compute_squeeze(const Config& cfg, std::optional<Scheme> scheme = std::nullopt,
                              std::optional<Formula> formula = std::nullopt);

Report run_spectrum(const Config& cfg, OutputFormat fmt);
Report run_squeeze(const Config& cfg, OutputFormat fmt, std::optional<Scheme> scheme,
                   std::optional<Formula> formula);
Report run_sweep(const Config& cfg, OutputFormat fmt, std::optional<Formula> formula);
Report run_optimize(const Config& cfg, OutputFormat fmt, std::optional<Formula> formula);
Report run_oracle_check(OutputFormat fmt);

// Dispatches one verb, writes the report, returns the process exit code.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace qnd

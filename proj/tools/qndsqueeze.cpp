#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qndsqueeze/cli.hpp"
#include "qndsqueeze/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"QND spin-squeezing calculator for the Cs D1 line"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  std::string format;
  std::string formula;
  std::string scheme;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "Write output here instead of stdout");
    sub->add_option("--format", format, "csv | json");
  };
  CLI::App* spectrum = app.add_subcommand("spectrum", "Refractive index and light shift vs frequency");
  add_common(spectrum, true);
  CLI::App* squeeze = app.add_subcommand("squeeze", "Squeezing for one scenario");
  add_common(squeeze, true);
  squeeze->add_option("--formula", formula, "single-d1 | cycling | two-colour-d1");
  squeeze->add_option("--scheme", scheme, "mz1 | mz2 | am");
  CLI::App* sweep = app.add_subcommand("sweep", "Optimized squeezing over an optical-depth grid");
  add_common(sweep, true);
  sweep->add_option("--formula", formula, "single-d1 | cycling | two-colour-d1");
  CLI::App* optimize = app.add_subcommand("optimize", "Optimal scattering probability at one depth");
  add_common(optimize, true);
  optimize->add_option("--formula", formula, "single-d1 | cycling | two-colour-d1");
  CLI::App* oracle = app.add_subcommand("oracle-check", "Compare closed forms with exact oracles");
  add_common(oracle, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qnd::kExitOk : qnd::kExitConfig;
  }

  qnd::RunOptions opts;
  opts.verb = app.get_subcommands().front()->get_name();
  opts.config_path = config;
  try {
    if (!out.empty()) opts.out_path = out;
    if (!format.empty()) opts.format = qnd::format_from_string(format);
    if (!formula.empty()) opts.formula = qnd::formula_from_string(formula);
    if (!scheme.empty()) opts.scheme = qnd::scheme_from_string(scheme);
  } catch (const qnd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qnd::kExitConfig;
  }
  return qnd::run(opts, std::cout, std::cerr);
}

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omstirap/commands.hpp"
#include "omstirap/config.hpp"
#include "omstirap/errors.hpp"

namespace {

// Loads the config file (or defaults) and applies command-line overrides.
// Returns false after printing a diagnostic; the caller exits with code 2.
bool load_config(const std::string& config_path, const std::string& out_dir,
                 bool strict, omstirap::RunConfig& config) {
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << '\n';
      return false;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      config = omstirap::parse_config(text.str());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return false;
    }
  }
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (strict) config.strict = true;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STIRAP-like transfer of phonon-number fluctuations between "
               "two membranes in a three-sub-cavity optomechanical system"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool strict = false;
  std::vector<std::string> axis_specs;
  double omega_p = 0.0, omega_s = 0.0, delta_p = 0.0, delta_s = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value configuration file");
    cmd->add_option("--out", out_dir, "output directory (overrides out_dir)");
    cmd->add_flag("--strict", strict, "promote validation warnings to errors");
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "propagate the fluctuation occupancies");
  add_common(simulate);

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "branch-tracked eigenvalues over time");
  add_common(spectrum);

  CLI::App* sweep = app.add_subcommand("sweep", "map metrics over a parameter grid");
  add_common(sweep);
  sweep->add_option("--axis", axis_specs,
                    "axis spec name=v1,v2,... (A, T, tau, gamma_M, gamma_m, g, nbar)");

  CLI::App* stirap3 =
      app.add_subcommand("stirap3", "three-level dark-state reference");
  stirap3->add_option("--omega-p", omega_p, "pump amplitude");
  stirap3->add_option("--omega-s", omega_s, "Stokes amplitude");
  stirap3->add_option("--delta-p", delta_p, "pump detuning");
  stirap3->add_option("--delta-s", delta_s, "Stokes detuning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (stirap3->parsed())
    return omstirap::cmd_stirap3(omega_p, omega_s, delta_p, delta_s);

  omstirap::RunConfig config;
  if (!load_config(config_path, out_dir, strict, config)) return 2;

  if (simulate->parsed()) return omstirap::cmd_simulate(config);
  if (spectrum->parsed()) return omstirap::cmd_spectrum(config);
  if (sweep->parsed()) return omstirap::cmd_sweep(config, axis_specs);
  return 2;
}

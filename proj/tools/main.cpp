// tcl2: command-line driver for the TCL2 master-equation simulator.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tcl2/commands.hpp"
#include "tcl2/errors.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> modes;
  std::string out_dir = "tcl2_out";
  unsigned jobs = 0;
  std::optional<double> t_end;
  std::optional<std::size_t> samples;
  std::vector<std::string> observables;
};

void add_common(CLI::App* sub, Flags& f, bool many_modes) {
  sub->add_option("--config", f.config_path, "JSON config file (defaults apply when omitted)");
  auto* mode = sub->add_option("--mode", f.modes,
                               many_modes ? "Modes to compare, comma separated (NM_BS, NM_SA, M_BS, M_SA, LA_*)"
                                          : "Approximation mode (NM_BS, NM_SA, M_BS, M_SA, LA_*)");
  if (many_modes) {
    mode->delimiter(',');
  } else {
    mode->expected(1);
  }
  sub->add_option("--out", f.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--jobs", f.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  sub->add_option("--t-end", f.t_end, "End of the time grid");
  sub->add_option("--samples", f.samples, "Number of grid points");
}

tcl2::RunConfig load(const Flags& f, bool many_modes) {
  std::string text;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw tcl2::ConfigError("cannot read config file '" + f.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  tcl2::RunConfig cfg = tcl2::parse_config(text);
  if (!f.modes.empty()) {
    if (many_modes) {
      cfg.compare_modes.clear();
      for (const auto& m : f.modes) cfg.compare_modes.push_back(tcl2::ApproximationMode::parse(m));
    } else {
      cfg.mode = tcl2::ApproximationMode::parse(f.modes.front());
    }
  }
  if (f.t_end) cfg.t_end = *f.t_end;
  if (f.samples) cfg.samples = *f.samples;
  if (!f.observables.empty()) {
    if (!cfg.sweep) throw tcl2::ConfigError("--observables needs a sweep section in the config");
    cfg.sweep->observables = f.observables;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TCL2 master-equation simulator for a dimer coupled to a sink through an Ohmic bath"};
  app.require_subcommand(1);
  Flags flags;

  auto* evolve = app.add_subcommand("evolve", "Time evolution of the reduced density matrix");
  add_common(evolve, flags, false);
  auto* steady = app.add_subcommand("steady", "Stationary state");
  add_common(steady, flags, false);
  auto* sweep = app.add_subcommand("sweep", "Stationary observables over one or two parameter axes");
  add_common(sweep, flags, false);
  sweep->add_option("--observables", flags.observables, "Observables to report, comma separated")->delimiter(',');
  auto* scan = app.add_subcommand("positivity-scan", "Smallest stationary eigenvalue over a (beta, v12) grid");
  add_common(scan, flags, false);
  auto* compare = app.add_subcommand("compare-modes", "rho33(t) under several approximation modes");
  add_common(compare, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tcl2::kExitConfig;
  }

  const bool many = compare->parsed();
  tcl2::RunConfig cfg;
  try {
    cfg = load(flags, many);
  } catch (const tcl2::ConfigError& e) {
    std::cerr << "tcl2: " << e.what() << "\n";
    return tcl2::kExitConfig;
  }

  const tcl2::CommandOptions options{flags.out_dir, flags.jobs};
  tcl2::CommandResult result;
  if (evolve->parsed()) result = tcl2::cmd_evolve(cfg, options);
  if (steady->parsed()) result = tcl2::cmd_steady(cfg, options);
  if (sweep->parsed()) result = tcl2::cmd_sweep(cfg, options);
  if (scan->parsed()) result = tcl2::cmd_positivity_scan(cfg, options);
  if (compare->parsed()) result = tcl2::cmd_compare_modes(cfg, options);

  if (!result.message.empty()) std::cerr << "tcl2: " << result.message << "\n";
  for (const auto& f : result.outputs) std::cout << (std::filesystem::path(flags.out_dir) / f).string() << "\n";
  return result.exit_code;
}

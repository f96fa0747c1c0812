// atomflux: noise-flux spectra of hydrogen-like atoms from the command line.

#include "atomflux/app.hpp"
#include "atomflux/errors.hpp"
#include "atomflux/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace atomflux;

// Raw command-line values; only options actually given override the config file.
struct Overrides {
  std::string config_path;
  std::string units;
  int Z = 0;
  std::string isotope;
  double nuclear_mass = 0.0;
  int n_upper = 0;
  double gamma = 0.0;
  double x0 = 0.0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  std::size_t points = 0;
  bool no_refine = false;
  std::vector<double> omegas;
  std::string output;
  std::string format;
  unsigned threads = 0;
  // sim
  double sim_gamma = 0.0;
  double sim_omega = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t ensembles = 0;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  std::size_t segment = 0;
  double overlap = 0.0;
  std::string integrator;
  std::string dump;
  bool flat = false;
};

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("-c,--config", o.config_path, "JSON run configuration (schema_version 1)");
  cmd.add_option("--units", o.units, "SI or normalized (default normalized)");
  cmd.add_option("--Z", o.Z, "atomic number");
  cmd.add_option("--isotope", o.isotope, "H-1, D-2 or He-4");
  cmd.add_option("--nuclear-mass", o.nuclear_mass, "nuclear mass in kg");
  cmd.add_option("-n,--n-upper", o.n_upper, "upper level (>= 2)");
  cmd.add_option("--gamma", o.gamma,
                 "gamma_sp: rad/s in SI, gamma/omega_vib in normalized units");
  cmd.add_option("--x0", o.x0, "initial amplitude <x(0)> (required in SI)");
  cmd.add_option("-o,--output", o.output, "output file (default stdout)");
  cmd.add_option("--format", o.format, "csv or json");
  cmd.add_option("--threads", o.threads, "worker thread cap (env ATOMFLUX_THREADS)");
}

void add_grid(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--grid-min", o.grid_min, "lowest angular frequency");
  cmd.add_option("--grid-max", o.grid_max, "highest angular frequency (default 3 omega_vib)");
  cmd.add_option("--points", o.points, "uniform base points (>= 16)");
  cmd.add_flag("--no-refine", o.no_refine, "disable dense windows around the resonances");
  cmd.add_option("--omega", o.omegas, "explicit grid point(s); replaces the generated grid");
}

void add_sim(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--sim-gamma", o.sim_gamma, "simulated gamma_sp (normalized)");
  cmd.add_option("--sim-omega", o.sim_omega, "simulated omega_vib (normalized)");
  cmd.add_option("--dt", o.dt, "time step");
  cmd.add_option("--steps", o.steps, "recorded samples per ensemble");
  cmd.add_option("--ensembles", o.ensembles, "ensemble members");
  cmd.add_option("--seed", o.seed, "64-bit seed");
  cmd.add_option("--burn-in", o.burn_in, "discarded steps (default 10 / (gamma dt))");
  cmd.add_option("--segment", o.segment, "Welch segment length");
  cmd.add_option("--overlap", o.overlap, "Welch overlap fraction in [0, 1)");
  cmd.add_option("--integrator", o.integrator, "semi-implicit-euler, explicit-euler or exact");
  cmd.add_option("--dump", o.dump, "write raw trajectories (little-endian f64)");
}

bool given(const CLI::App& cmd, const std::string& name) { return cmd.count(name) > 0; }

app::RunConfig build(const CLI::App& cmd, const Overrides& o) {
  app::RunConfig run;
  if (given(cmd, "--config")) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot read config file " + o.config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    run = app::run_config_from_json(doc);
  }
  auto has = [&](const char* name) {
    try {
      return given(cmd, name);
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (has("--units")) run.units = parse_unit_system(o.units);
  if (has("--Z")) run.atom.Z = o.Z;
  if (has("--isotope")) run.atom.isotope = o.isotope;
  if (has("--nuclear-mass")) run.atom.nuclear_mass = o.nuclear_mass;
  if (has("--n-upper")) run.transition.n_upper = o.n_upper;
  if (has("--gamma")) run.transition.gamma_sp = o.gamma;
  if (has("--x0")) run.transition.x0 = o.x0;
  if (has("--output")) run.output.path = o.output;
  if (has("--format")) {
    if (o.format == "csv") run.output.format = app::OutputFormat::csv;
    else if (o.format == "json") run.output.format = app::OutputFormat::json;
    else throw ConfigError("output format must be csv or json, got '" + o.format + "'");
  }
  if (has("--grid-min")) run.grid.min = o.grid_min;
  if (has("--grid-max")) run.grid.max = o.grid_max;
  if (has("--points")) run.grid.points = o.points;
  if (has("--no-refine")) run.grid.auto_refine = false;
  if (has("--omega")) run.grid.omegas = o.omegas;

  const bool any_sim = has("--sim-gamma") || has("--sim-omega") || has("--dt") ||
                       has("--steps") || has("--ensembles") || has("--seed") ||
                       has("--burn-in") || has("--segment") || has("--overlap") ||
                       has("--integrator");
  if (any_sim && !run.sim) run.sim = SimConfig{};
  if (run.sim) {
    auto& s = *run.sim;
    if (has("--sim-gamma")) s.gamma_sp = o.sim_gamma;
    if (has("--sim-omega")) s.omega_vib = o.sim_omega;
    if (has("--dt")) s.dt = o.dt;
    if (has("--steps")) s.n_steps = o.steps;
    if (has("--ensembles")) s.n_ensembles = o.ensembles;
    if (has("--seed")) s.seed = o.seed;
    if (has("--burn-in")) s.burn_in = o.burn_in;
    if (has("--segment")) s.welch.segment_length = o.segment;
    if (has("--overlap")) s.welch.overlap_fraction = o.overlap;
    if (has("--integrator")) s.integrator = parse_integrator(o.integrator);
  }
  if (has("--dump")) run.dump_path = o.dump;
  if (has("--test-flat-spectrum")) run.inject_flat_spectrum = o.flat;

  if (has("--threads")) {
    run.threads = resolve_threads(o.threads);
  } else if (!given(cmd, "--config")) {
    run.threads = resolve_threads(std::nullopt);
  }
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"atomflux: vibrational-Langevin noise-flux spectra of hydrogen-like atoms"};
  cli.require_subcommand(1);
  Overrides o;

  auto* constants = cli.add_subcommand("constants", "print omega0, omega_vib, gamma_sp and A");
  add_common(*constants, o);
  auto* spectra = cli.add_subcommand("spectra", "write N_x, N_U, N_K, N_UK, N_SP on a grid");
  add_common(*spectra, o);
  add_grid(*spectra, o);
  auto* fit = cli.add_subcommand("fit", "measure the N_SP linewidth against 2 gamma_sp");
  add_common(*fit, o);
  add_grid(*fit, o);
  fit->add_flag("--test-flat-spectrum", o.flat)->group("");
  auto* simulate = cli.add_subcommand("simulate", "time-domain Langevin check of the PSD");
  add_common(*simulate, o);
  add_sim(*simulate, o);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return app::kExitConfig;
  }

  CLI::App* cmd = cli.get_subcommands().front();
  app::RunConfig run;
  try {
    run = build(*cmd, o);
  } catch (const atomflux::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::kExitConfig;
  }

  if (cmd == constants) return app::cmd_constants(run, std::cout, std::cerr);
  if (cmd == spectra) return app::cmd_spectra(run, std::cout, std::cerr);
  if (cmd == fit) return app::cmd_fit(run, std::cout, std::cerr);
  if (!run.sim) run.sim = SimConfig{};
  return app::cmd_simulate(run, std::cout, std::cerr);
}

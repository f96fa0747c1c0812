#include "atomflux/app.hpp"

#include "atomflux/errors.hpp"
#include "atomflux/format.hpp"
#include "atomflux/lorentzian.hpp"
#include "atomflux/trajectory_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace atomflux::app {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

template <class T>
void read_if(const json& obj, const char* key, std::optional<T>& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("output format must be csv or json, got '" + text + "'");
}

SimConfig sim_from_json(const json& obj) {
  reject_unknown_keys(obj, "sim",
                      {"omega_vib", "gamma_sp", "mu", "dt", "n_steps", "n_ensembles", "seed",
                       "burn_in", "integrator", "welch", "initial_state"});
  SimConfig cfg;
  read_if(obj, "omega_vib", cfg.omega_vib);
  read_if(obj, "gamma_sp", cfg.gamma_sp);
  read_if(obj, "mu", cfg.mu);
  read_if(obj, "dt", cfg.dt);
  read_if(obj, "n_steps", cfg.n_steps);
  read_if(obj, "n_ensembles", cfg.n_ensembles);
  read_if(obj, "seed", cfg.seed);
  read_if(obj, "burn_in", cfg.burn_in);
  read_if(obj, "initial_state", cfg.initial_state);
  if (obj.contains("integrator")) {
    cfg.integrator = parse_integrator(obj.at("integrator").get<std::string>());
  }
  if (obj.contains("welch")) {
    const auto& w = obj.at("welch");
    reject_unknown_keys(w, "sim.welch", {"segment_length", "overlap_fraction", "window"});
    read_if(w, "segment_length", cfg.welch.segment_length);
    read_if(w, "overlap_fraction", cfg.welch.overlap_fraction);
    if (w.contains("window") && w.at("window").get<std::string>() != "hann") {
      throw ConfigError("only the hann window is supported");
    }
  }
  return cfg;
}

json sim_to_json(const SimConfig& cfg) {
  json doc = json::parse(sim_config_json(cfg));
  doc["initial_state"] = cfg.initial_state;
  if (!cfg.burn_in) doc.erase("burn_in");
  return doc;
}

std::string fmt(double v) { return format_double(v); }

// Runs a command body and maps library errors onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NoPeakError& e) {
    err << "fit failed: " << e.name() << ": " << e.what() << '\n';
    return kExitFit;
  } catch (const InsufficientResolutionError& e) {
    err << "fit failed: " << e.name() << ": " << e.what() << '\n';
    return kExitFit;
  } catch (const InsufficientDataError& e) {
    err << "validation failed: " << e.name() << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  }
}

// Writes through `write` to run.output.path, or to `out` when no path is set.
void emit(const RunConfig& run, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (!run.output.path) {
    write(out);
    return;
  }
  std::ofstream file(*run.output.path, std::ios::binary);
  if (!file) throw IoError("cannot open " + *run.output.path + " for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("write failed for " + *run.output.path);
}

void warn_broad_line(const TransitionSpec& t, std::ostream& err) {
  if (t.is_broad_line()) {
    err << "warning: gamma_sp / omega_vib = " << fmt(t.gamma_sp / t.omega_vib)
        << " exceeds 0.1; the narrow-line approximation does not hold\n";
  }
}

}  // namespace

void RunConfig::validate() const {
  if (atom.Z && *atom.Z < 1) throw ConfigError("atomic number must be ≥ 1");
  if (transition.n_upper < 2) throw ConfigError("upper level n must be >= 2");
  if (grid.omegas.empty() && grid.points < 16) throw ConfigError("grid.points must be >= 16");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  constants.validate();
}

RunConfig run_config_from_json(const json& doc) {
  reject_unknown_keys(doc, "config",
                      {"schema_version", "units", "atom", "transition", "grid", "output", "sim",
                       "dump_path", "constants", "threads"});
  if (!doc.contains("schema_version")) throw ConfigError("config lacks schema_version");
  if (doc.at("schema_version").get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported config schema_version");
  }
  RunConfig run;
  if (doc.contains("units")) run.units = parse_unit_system(doc.at("units").get<std::string>());
  if (doc.contains("atom")) {
    const auto& a = doc.at("atom");
    reject_unknown_keys(a, "atom", {"Z", "isotope", "nuclear_mass"});
    read_if(a, "Z", run.atom.Z);
    read_if(a, "isotope", run.atom.isotope);
    read_if(a, "nuclear_mass", run.atom.nuclear_mass);
  }
  if (doc.contains("transition")) {
    const auto& t = doc.at("transition");
    reject_unknown_keys(t, "transition", {"n_upper", "gamma_sp", "x0"});
    read_if(t, "n_upper", run.transition.n_upper);
    read_if(t, "gamma_sp", run.transition.gamma_sp);
    read_if(t, "x0", run.transition.x0);
  }
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    reject_unknown_keys(g, "grid", {"min", "max", "points", "auto_refine", "omegas"});
    read_if(g, "min", run.grid.min);
    read_if(g, "max", run.grid.max);
    read_if(g, "points", run.grid.points);
    read_if(g, "auto_refine", run.grid.auto_refine);
    read_if(g, "omegas", run.grid.omegas);
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown_keys(o, "output", {"path", "format"});
    read_if(o, "path", run.output.path);
    if (o.contains("format")) run.output.format = parse_format(o.at("format").get<std::string>());
  }
  if (doc.contains("sim")) run.sim = sim_from_json(doc.at("sim"));
  read_if(doc, "dump_path", run.dump_path);
  if (doc.contains("constants")) {
    const auto& c = doc.at("constants");
    reject_unknown_keys(c, "constants", {"hbar", "c", "alpha", "k_B", "m_e", "m_p"});
    read_if(c, "hbar", run.constants.hbar);
    read_if(c, "c", run.constants.c);
    read_if(c, "alpha", run.constants.alpha);
    read_if(c, "k_B", run.constants.k_B);
    read_if(c, "m_e", run.constants.m_e);
    read_if(c, "m_p", run.constants.m_p);
  }
  read_if(doc, "threads", run.threads);
  return run;
}

json run_config_to_json(const RunConfig& run) {
  json doc = {{"schema_version", kSchemaVersion}, {"units", std::string(to_string(run.units))}};
  json atom = json::object();
  if (run.atom.Z) atom["Z"] = *run.atom.Z;
  if (run.atom.isotope) atom["isotope"] = *run.atom.isotope;
  if (run.atom.nuclear_mass) atom["nuclear_mass"] = *run.atom.nuclear_mass;
  doc["atom"] = atom;
  json transition = {{"n_upper", run.transition.n_upper}};
  if (run.transition.gamma_sp) transition["gamma_sp"] = *run.transition.gamma_sp;
  if (run.transition.x0) transition["x0"] = *run.transition.x0;
  doc["transition"] = transition;
  json grid = {{"min", run.grid.min},
               {"points", run.grid.points},
               {"auto_refine", run.grid.auto_refine}};
  if (run.grid.max) grid["max"] = *run.grid.max;
  if (!run.grid.omegas.empty()) grid["omegas"] = run.grid.omegas;
  doc["grid"] = grid;
  json output = {{"format", run.output.format == OutputFormat::csv ? "csv" : "json"}};
  if (run.output.path) output["path"] = *run.output.path;
  doc["output"] = output;
  if (run.sim) doc["sim"] = sim_to_json(*run.sim);
  if (run.dump_path) doc["dump_path"] = *run.dump_path;
  doc["constants"] = {{"hbar", run.constants.hbar}, {"c", run.constants.c},
                      {"alpha", run.constants.alpha}, {"k_B", run.constants.k_B},
                      {"m_e", run.constants.m_e}, {"m_p", run.constants.m_p}};
  doc["threads"] = run.threads;
  return doc;
}

AtomSpec build_atom(const RunConfig& run) {
  const auto& a = run.atom;
  if (a.Z && *a.Z < 1) throw ConfigError("atomic number must be ≥ 1");
  std::optional<Isotope> iso;
  if (a.isotope) {
    iso = find_isotope(*a.isotope);
    if (!iso) throw ConfigError("unknown isotope '" + *a.isotope + "' (known: H-1, D-2, He-4)");
  }
  const int Z = a.Z.value_or(iso ? iso->Z : 1);
  if (iso && iso->Z != Z) {
    throw ConfigError("isotope " + *a.isotope + " has Z = " + std::to_string(iso->Z));
  }
  if (a.nuclear_mass) return AtomSpec(Z, *a.nuclear_mass, run.constants);
  if (iso) {
    // the proton mass follows any overridden constants
    const double mass = iso->name == "H-1" ? run.constants.m_p : iso->nuclear_mass;
    return AtomSpec(Z, mass, run.constants);
  }
  if (Z == 1) return AtomSpec(1, run.constants.m_p, run.constants);
  if (Z == 2) return AtomSpec(2, find_isotope("He-4")->nuclear_mass, run.constants);
  throw ConfigError("nuclear mass or isotope required for Z = " + std::to_string(Z));
}

TransitionSpec build_transition(const RunConfig& run) {
  run.validate();
  const AtomSpec atom = build_atom(run);
  const int n = run.transition.n_upper;
  if (run.units == UnitSystem::normalized) {
    const double gamma = run.transition.gamma_sp.value_or(
        kHydrogen2pGamma / vibrational_frequency(atom, n, run.constants));
    return TransitionSpec::normalized(n, gamma, run.transition.x0.value_or(1.0));
  }
  if (!run.transition.x0) throw ConfigError("x0 must be supplied explicitly in SI mode");
  return TransitionSpec::si(atom, n, run.transition.gamma_sp.value_or(kHydrogen2pGamma),
                            *run.transition.x0, run.constants);
}

FrequencyGrid build_grid(const RunConfig& run, const TransitionSpec& t) {
  if (!run.grid.omegas.empty()) return FrequencyGrid(run.grid.omegas, t.units);
  GridSpec spec;
  spec.min = run.grid.min;
  spec.max = run.grid.max;
  spec.points = run.grid.points;
  spec.auto_refine = run.grid.auto_refine;
  if (spec.points < 16) throw ConfigError("grid.points must be >= 16");
  return make_spectral_grid(t, spec);
}

json psd_to_json(const PsdEstimate& psd) {
  const auto omegas = psd.grid.omegas();
  return {{"schema", "atomflux.psd"},
          {"schema_version", kSchemaVersion},
          {"sidedness", psd.sidedness == Sidedness::two_sided ? "two_sided" : "one_sided"},
          {"dt", psd.dt},
          {"segment_length", psd.segment_length},
          {"segments_per_ensemble", psd.n_segments},
          {"ensembles", psd.n_ensembles},
          {"variance", psd.variance},
          {"variance_stderr", psd.variance_stderr},
          {"omega", std::vector<double>(omegas.begin(), omegas.end())},
          {"s_xx", psd.s_xx},
          {"stderr", psd.standard_error}};
}

json validation_to_json(const ValidationReport& report) {
  json bands = json::array();
  for (const auto& b : report.bands) {
    bands.push_back({{"omega_lo", b.omega_lo},
                     {"omega_hi", b.omega_hi},
                     {"bins", b.bins},
                     {"rms_relative_deviation", b.rms_relative_deviation}});
  }
  return {{"schema", "atomflux.validation"},
          {"schema_version", kSchemaVersion},
          {"bins", report.bins},
          {"rms_relative_deviation", report.rms_relative_deviation},
          {"max_relative_deviation", report.max_relative_deviation},
          {"peak_height_ratio", report.peak_height_ratio},
          {"tolerance", report.tolerance},
          {"bands", bands},
          {"passed", report.passed}};
}

int cmd_constants(const RunConfig& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    run.validate();
    const AtomSpec atom = build_atom(run);
    const int n = run.transition.n_upper;
    const double omega0_si = fundamental_frequency(atom, run.constants);
    const double vib_si = vibrational_frequency(atom, n, run.constants);
    double omega0 = omega0_si;
    double vib = vib_si;
    double gamma = run.transition.gamma_sp.value_or(kHydrogen2pGamma);
    if (run.units == UnitSystem::normalized) {
      omega0 = static_cast<double>(n) * n * n;
      vib = 1.0;
      gamma = run.transition.gamma_sp.value_or(kHydrogen2pGamma / vib_si);
    }
    if (!(gamma > 0.0)) throw ConfigError("gamma_sp must be > 0");
    const auto second = second_order_vibrational_frequency(omega0, n);
    const json doc = {{"schema", "atomflux.constants"},
                      {"schema_version", kSchemaVersion},
                      {"units", std::string(to_string(run.units))},
                      {"Z", atom.Z()},
                      {"reduced_mass", atom.reduced_mass()},
                      {"n_upper", n},
                      {"omega0", omega0},
                      {"omega_vib", vib},
                      {"omega_vib_second_order", second.omega},
                      {"beta2", second.beta2},
                      {"gamma_sp", gamma},
                      {"einstein_a", 2.0 * gamma}};
    if (run.output.path) {
      emit(run, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    }
    if (run.output.format == OutputFormat::json) {
      out << doc.dump(2) << '\n';
      return kExitOk;
    }
    const char* unit = run.units == UnitSystem::si ? " rad/s" : "";
    out << "units          " << to_string(run.units) << '\n'
        << "Z              " << atom.Z() << '\n'
        << "reduced_mass   " << fmt(atom.reduced_mass()) << " kg\n"
        << "n_upper        " << n << '\n'
        << "omega0         " << fmt(omega0) << unit << '\n'
        << "omega_vib      " << fmt(vib) << unit << '\n'
        << "gamma_sp       " << fmt(gamma) << unit << '\n'
        << "A = 2 gamma_sp " << fmt(2.0 * gamma) << unit << '\n';
    return kExitOk;
  });
}

int cmd_spectra(const RunConfig& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TransitionSpec t = build_transition(run);
    warn_broad_line(t, err);
    const FrequencyGrid grid = build_grid(run, t);
    const NoiseSpectra spectra = compute_noise_spectra(grid, t, run.threads);
    emit(run, out, [&](std::ostream& os) {
      if (run.output.format == OutputFormat::json) {
        os << spectra_to_json(spectra).dump() << '\n';
      } else {
        write_spectra_csv(os, spectra);
      }
    });
    return kExitOk;
  });
}

int cmd_fit(const RunConfig& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TransitionSpec t = build_transition(run);
    warn_broad_line(t, err);
    const FrequencyGrid grid = build_grid(run, t);
    // The resonance near omega ~ 0 straddles the origin; the measurable line
    // is the one above omega_vib.
    std::vector<double> omegas;
    std::vector<double> values;
    for (double w : grid.omegas()) {
      if (w > t.omega_vib) {
        omegas.push_back(w);
        values.push_back(run.inject_flat_spectrum ? 1.0 : spontaneous_emission_flux(w, t));
      }
    }
    const LorentzianFit fit = fit_lorentzian(omegas, values);
    const double expected = t.einstein_a();
    const double ratio = fit.fwhm / expected;
    const json doc = {{"schema", "atomflux.fit"},
                      {"schema_version", kSchemaVersion},
                      {"units", std::string(to_string(t.units))},
                      {"peak_omega", fit.peak_omega},
                      {"peak_height", fit.peak_height},
                      {"fwhm", fit.fwhm},
                      {"einstein_a", expected},
                      {"fwhm_ratio", ratio},
                      {"residual", fit.residual}};
    if (run.output.path) {
      emit(run, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    }
    if (run.output.format == OutputFormat::json) {
      out << doc.dump(2) << '\n';
    } else {
      out << "peak_omega     " << fmt(fit.peak_omega) << '\n'
          << "peak_height    " << fmt(fit.peak_height) << '\n'
          << "fwhm           " << fmt(fit.fwhm) << '\n'
          << "A = 2 gamma_sp " << fmt(expected) << '\n'
          << "fwhm / A       " << std::fixed << std::setprecision(6) << ratio << '\n'
          << "residual       " << std::scientific << std::setprecision(3) << fit.residual
          << '\n';
      out << std::defaultfloat;
    }
    return kExitOk;
  });
}

int cmd_simulate(const RunConfig& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    run.validate();
    const SimConfig cfg = run.sim.value_or(SimConfig{});
    cfg.validate();
    PsdEstimate psd;
    if (run.dump_path) {
      const auto trajectories = integrate_ensembles(cfg, run.threads);
      write_trajectory_dump(*run.dump_path, cfg, trajectories);
      psd = estimate_psd(trajectories, cfg);
    } else {
      psd = simulate_psd(cfg, run.threads);
    }
    const TransitionSpec t = transition_for(cfg);
    const ValidationReport report = validate_against_analytic(psd, t);
    const double analytic_variance = 1.0 / (2.0 * t.omega_vib * t.omega_vib * t.mu * t.mu);

    if (run.output.path) {
      emit(run, out, [&](std::ostream& os) {
        if (run.output.format == OutputFormat::json) {
          os << psd_to_json(psd).dump() << '\n';
        } else {
          write_psd_csv(os, psd);
        }
      });
    }
    if (run.output.format == OutputFormat::json) {
      json doc = validation_to_json(report);
      doc["variance"] = {{"simulated", psd.variance},
                         {"stderr", psd.variance_stderr},
                         {"analytic", analytic_variance},
                         {"integrated_psd", integrated_power(psd)}};
      out << doc.dump(2) << '\n';
    } else {
      out << "bins                   " << report.bins << '\n'
          << "rms relative deviation " << fmt(report.rms_relative_deviation) << '\n'
          << "max relative deviation " << fmt(report.max_relative_deviation) << '\n'
          << "peak height ratio      " << fmt(report.peak_height_ratio) << '\n'
          << "variance (sim)         " << fmt(psd.variance) << " +- "
          << fmt(psd.variance_stderr) << '\n'
          << "variance (analytic)    " << fmt(analytic_variance) << '\n'
          << "integrated psd         " << fmt(integrated_power(psd)) << '\n';
      for (const auto& b : report.bands) {
        out << "  band [" << fmt(b.omega_lo) << ", " << fmt(b.omega_hi)
            << "] rms " << fmt(b.rms_relative_deviation) << '\n';
      }
      out << (report.passed ? "PASS" : "FAIL") << " at tolerance " << fmt(report.tolerance)
          << '\n';
    }
    return report.passed ? kExitOk : kExitValidation;
  });
}

}  // namespace atomflux::app

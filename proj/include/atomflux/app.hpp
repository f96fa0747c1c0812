#pragma once

#include "atomflux/constants.hpp"
#include "atomflux/langevin.hpp"
#include "atomflux/psd.hpp"
#include "atomflux/spectra.hpp"

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace atomflux::app {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFit = 4;
inline constexpr int kExitValidation = 5;

enum class OutputFormat { csv, json };

struct AtomConfig {
  std::optional<int> Z;                // defaults to the isotope's, else 1
  std::optional<std::string> isotope;  // H-1, D-2 or He-4
  std::optional<double> nuclear_mass;  // kg, overrides the isotope
};

struct TransitionConfig {
  int n_upper = 2;
  std::optional<double> gamma_sp;  // rad/s (SI) or gamma/omega_vib (normalized)
  std::optional<double> x0;        // required in SI
};

struct GridConfig {
  double min = 0.0;
  std::optional<double> max;  // default 3 omega_vib
  std::size_t points = 1001;
  bool auto_refine = true;
  std::vector<double> omegas;  // explicit grid; bypasses min/max/points
};

struct OutputConfig {
  std::optional<std::string> path;  // stdout when absent
  OutputFormat format = OutputFormat::csv;
};

/// Everything one CLI invocation needs. Built from an optional JSON document
/// and then overridden field by field from the command line.
struct RunConfig {
  AtomConfig atom;
  TransitionConfig transition;
  GridConfig grid;
  UnitSystem units = UnitSystem::normalized;
  OutputConfig output;
  std::optional<SimConfig> sim;
  std::optional<std::string> dump_path;  // raw trajectory dump
  PhysicalConstants constants = codata2018;
  unsigned threads = 1;
  bool inject_flat_spectrum = false;  // test hook for cmd_fit

  void validate() const;
};

/// Default H 2P -> 1S Lyman-alpha decay rate, rad/s.
inline constexpr double kHydrogen2pGamma = 4.69e8;

/// Parses a versioned config document (`"schema_version": 1`).
RunConfig run_config_from_json(const nlohmann::json& doc);
nlohmann::json run_config_to_json(const RunConfig& run);

AtomSpec build_atom(const RunConfig& run);
TransitionSpec build_transition(const RunConfig& run);
FrequencyGrid build_grid(const RunConfig& run, const TransitionSpec& t);

nlohmann::json psd_to_json(const PsdEstimate& psd);
nlohmann::json validation_to_json(const ValidationReport& report);

int cmd_constants(const RunConfig& run, std::ostream& out, std::ostream& err);
int cmd_spectra(const RunConfig& run, std::ostream& out, std::ostream& err);
int cmd_fit(const RunConfig& run, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& run, std::ostream& out, std::ostream& err);

}  // namespace atomflux::app

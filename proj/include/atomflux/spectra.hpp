#pragma once

#include "atomflux/atom.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atomflux {

enum class UnitSystem { si, normalized };

std::string_view to_string(UnitSystem units) noexcept;
UnitSystem parse_unit_system(std::string_view text);

/// One radiating transition n_upper -> lower, with its damping and the
/// amplitude <x(0)> of the undamped vibration.
struct TransitionSpec {
  int n_upper = 2;
  double gamma_sp = 0.0;   // rad/s, half of Einstein A
  double x0 = 1.0;
  double omega_vib = 1.0;  // omega0 / n_upper^3
  double omega0 = 8.0;
  double mu = 1.0;
  UnitSystem units = UnitSystem::normalized;

  /// SI transition of `atom`; x0 must be supplied (metres).
  static TransitionSpec si(const AtomSpec& atom, int n_upper, double gamma_sp, double x0,
                           const PhysicalConstants& constants = codata2018);

  /// mu = 1, omega_vib = 1, omega0 = n^3; gamma_ratio is gamma_sp / omega_vib.
  static TransitionSpec normalized(int n_upper, double gamma_ratio, double x0 = 1.0);

  /// Throws ConfigError on n_upper < 2, gamma_sp <= 0, non-finite fields, or an
  /// omega_vib inconsistent with omega0 / n^3.
  void validate() const;

  /// gamma_sp / omega_vib > 0.1: the narrow-line picture no longer applies.
  bool is_broad_line() const noexcept { return gamma_sp > 0.1 * omega_vib; }

  /// FWHM predicted for the emission line, 2 gamma_sp.
  double einstein_a() const noexcept { return 2.0 * gamma_sp; }
};

/// Strictly increasing, finite angular frequencies.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  /// Throws ConfigError unless strictly increasing and finite.
  explicit FrequencyGrid(std::vector<double> omegas, UnitSystem units = UnitSystem::normalized);

  static FrequencyGrid uniform(double lo, double hi, std::size_t points,
                               UnitSystem units = UnitSystem::normalized);

  std::span<const double> omegas() const noexcept { return omegas_; }
  std::size_t size() const noexcept { return omegas_.size(); }
  bool empty() const noexcept { return omegas_.empty(); }
  double operator[](std::size_t i) const { return omegas_[i]; }
  UnitSystem units() const noexcept { return units_; }

 private:
  std::vector<double> omegas_;
  UnitSystem units_ = UnitSystem::normalized;
};

struct GridSpec {
  double min = 0.0;
  std::optional<double> max;    // defaults to 3 omega_vib
  std::size_t points = 1001;    // uniform base points, >= 16
  bool auto_refine = true;
  std::size_t refine_points = 10000;
  double refine_halfwidth = 50.0;  // in units of gamma_sp
};

/// Uniform base grid on [min, max] merged with dense windows around the two
/// resonances omega_vib -+ sqrt(omega_vib^2 - 2 gamma^2) and the exact point
/// omega_vib. Windows are clipped to [min, max].
FrequencyGrid make_spectral_grid(const TransitionSpec& t, const GridSpec& spec);

/// Resonance locations, i.e. minima of |D(omega - omega_vib)|^-2.
struct Resonances {
  double lower;
  double upper;
};
Resonances resonance_frequencies(const TransitionSpec& t);

/// D(omega) = 1 / (-omega^2 + omega_vib^2 + 2 i gamma omega).
std::complex<double> transfer_function(double omega, const TransitionSpec& t);

/// i mu omega delta_x.
std::complex<double> momentum_fluctuation(double omega, std::complex<double> delta_x,
                                          const TransitionSpec& t);

/// Mean photon number evaluated as printed, hbar omega [1/2 + 1/(e^{hbar omega/kT} - 1)].
/// Note the leading hbar omega: the result carries units of energy.
struct PhotonOccupancy {
  double omega = 0.0;
  double temperature = 0.0;
  double nbar = 0.0;
};

PhotonOccupancy photon_occupancy(double omega, double temperature,
                                 const PhysicalConstants& constants = codata2018);

enum class ForceOrdering { normal, antinormal };

/// 2 gamma nbar (normal) or 2 gamma (nbar + 1) (antinormal).
double correlation_amplitude(double gamma_sp, double nbar, ForceOrdering ordering);

/// Same, with nbar from photon_occupancy. Throws ConfigError for T < 0.
double correlation_amplitude(double gamma_sp, double omega, double temperature,
                             ForceOrdering ordering,
                             const PhysicalConstants& constants = codata2018);

struct NoiseSpectra {
  FrequencyGrid grid;
  std::vector<double> n_x;
  std::vector<double> n_u;
  std::vector<double> n_k;
  std::vector<double> n_uk;  // equals N_KU
  std::vector<double> n_sp;
};

// Pointwise fluxes. All take omega on the physical (shifted) axis.
double positional_noise_flux(double omega, const TransitionSpec& t);
double potential_noise_flux(double omega, const TransitionSpec& t);
double kinetic_noise_flux(double omega, const TransitionSpec& t);
double interchange_noise_flux(double omega, const TransitionSpec& t);
/// N_U + N_K + N_UK + N_KU.
double spontaneous_emission_flux(double omega, const TransitionSpec& t);
/// 0.5 mu^2 omega0^2 x0^2 (omega0 - (omega - omega_vib))^2 N_x, the completed square.
double spontaneous_emission_flux_factored(double omega, const TransitionSpec& t);

std::vector<double> positional_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t);
std::vector<double> potential_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t);
std::vector<double> kinetic_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t);
std::vector<double> interchange_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t);
std::vector<double> spontaneous_emission_flux(const FrequencyGrid& grid, const TransitionSpec& t);

/// All five spectra. `threads` caps the data-parallel evaluation; results do
/// not depend on it.
NoiseSpectra compute_noise_spectra(const FrequencyGrid& grid, const TransitionSpec& t,
                                   unsigned threads = 1);

}  // namespace atomflux

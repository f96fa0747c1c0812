#include "atomflux/spectra.hpp"

#include "atomflux/errors.hpp"
#include "atomflux/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace atomflux {

std::string_view to_string(UnitSystem units) noexcept {
  return units == UnitSystem::si ? "SI" : "normalized";
}

UnitSystem parse_unit_system(std::string_view text) {
  if (text == "SI" || text == "si") return UnitSystem::si;
  if (text == "normalized") return UnitSystem::normalized;
  throw ConfigError("unknown unit system '" + std::string(text) + "' (expected SI or normalized)");
}

TransitionSpec TransitionSpec::si(const AtomSpec& atom, int n_upper, double gamma_sp, double x0,
                                  const PhysicalConstants& constants) {
  TransitionSpec t;
  t.n_upper = n_upper;
  t.gamma_sp = gamma_sp;
  t.x0 = x0;
  t.omega0 = fundamental_frequency(atom, constants);
  t.omega_vib = n_upper >= 1 ? vibrational_frequency(atom, n_upper, constants) : 0.0;
  t.mu = atom.reduced_mass();
  t.units = UnitSystem::si;
  t.validate();
  return t;
}

TransitionSpec TransitionSpec::normalized(int n_upper, double gamma_ratio, double x0) {
  TransitionSpec t;
  t.n_upper = n_upper;
  t.gamma_sp = gamma_ratio;
  t.x0 = x0;
  t.omega_vib = 1.0;
  t.omega0 = static_cast<double>(n_upper) * n_upper * n_upper;
  t.mu = 1.0;
  t.units = UnitSystem::normalized;
  t.validate();
  return t;
}

void TransitionSpec::validate() const {
  if (n_upper < 2) throw ConfigError("upper level must be >= 2");
  if (!std::isfinite(gamma_sp) || gamma_sp <= 0.0) throw ConfigError("gamma_sp must be > 0");
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  if (!std::isfinite(mu) || mu <= 0.0) throw ConfigError("mass must be > 0");
  if (!std::isfinite(omega0) || omega0 <= 0.0) throw ConfigError("omega0 must be > 0");
  const double n3 = static_cast<double>(n_upper) * n_upper * n_upper;
  if (!(std::abs(omega_vib * n3 - omega0) <= 1e-12 * omega0)) {
    throw ConfigError("omega_vib must equal omega0 / n^3");
  }
}

FrequencyGrid::FrequencyGrid(std::vector<double> omegas, UnitSystem units)
    : omegas_(std::move(omegas)), units_(units) {
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    if (!std::isfinite(omegas_[i])) throw ConfigError("frequency grid must be finite");
    if (i > 0 && !(omegas_[i] > omegas_[i - 1])) {
      throw ConfigError("frequency grid must be strictly increasing");
    }
  }
}

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, std::size_t points, UnitSystem units) {
  if (points < 2 || !(hi > lo)) throw ConfigError("uniform grid needs hi > lo and >= 2 points");
  std::vector<double> omegas(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i + 1 < points; ++i) omegas[i] = lo + step * static_cast<double>(i);
  omegas.back() = hi;
  return FrequencyGrid(std::move(omegas), units);
}

Resonances resonance_frequencies(const TransitionSpec& t) {
  const double w = t.omega_vib;
  const double g2 = 2.0 * t.gamma_sp * t.gamma_sp;
  if (g2 >= w * w) return {w, w};  // overdamped: single minimum at omega_vib
  const double root = std::sqrt(w * w - g2);
  // w - root without cancellation
  return {g2 / (w + root), w + root};
}

FrequencyGrid make_spectral_grid(const TransitionSpec& t, const GridSpec& spec) {
  const double lo = spec.min;
  const double hi = spec.max.value_or(3.0 * t.omega_vib);
  if (spec.points < 2) throw ConfigError("grid needs at least 2 points");
  const auto base = FrequencyGrid::uniform(lo, hi, spec.points);
  std::vector<double> omegas(base.omegas().begin(), base.omegas().end());
  if (spec.auto_refine) {
    const auto res = resonance_frequencies(t);
    const double half = spec.refine_halfwidth * t.gamma_sp;
    for (double center : {res.lower, res.upper}) {
      if (spec.refine_points < 2) break;
      const double step = 2.0 * half / static_cast<double>(spec.refine_points - 1);
      for (std::size_t i = 0; i < spec.refine_points; ++i) {
        const double w = center - half + step * static_cast<double>(i);
        if (w >= lo && w <= hi) omegas.push_back(w);
      }
    }
    if (t.omega_vib >= lo && t.omega_vib <= hi) omegas.push_back(t.omega_vib);
  }
  std::sort(omegas.begin(), omegas.end());
  omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());
  return FrequencyGrid(std::move(omegas), t.units);
}

std::complex<double> transfer_function(double omega, const TransitionSpec& t) {
  const std::complex<double> denom(t.omega_vib * t.omega_vib - omega * omega,
                                   2.0 * t.gamma_sp * omega);
  return 1.0 / denom;
}

std::complex<double> momentum_fluctuation(double omega, std::complex<double> delta_x,
                                          const TransitionSpec& t) {
  return std::complex<double>(0.0, t.mu * omega) * delta_x;
}

PhotonOccupancy photon_occupancy(double omega, double temperature,
                                 const PhysicalConstants& constants) {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (!(omega >= 0.0)) throw ConfigError("photon frequency must be >= 0");
  const double energy = constants.hbar * omega;
  const double thermal_energy = constants.k_B * temperature;
  double nbar = 0.0;
  if (energy == 0.0) {
    nbar = thermal_energy;  // limit of hbar w / (e^{hbar w / kT} - 1)
  } else if (temperature == 0.0) {
    nbar = 0.5 * energy;
  } else {
    nbar = energy * (0.5 + 1.0 / std::expm1(energy / thermal_energy));
  }
  return {omega, temperature, nbar};
}

double correlation_amplitude(double gamma_sp, double nbar, ForceOrdering ordering) {
  return ordering == ForceOrdering::normal ? 2.0 * gamma_sp * nbar
                                           : 2.0 * gamma_sp * (nbar + 1.0);
}

double correlation_amplitude(double gamma_sp, double omega, double temperature,
                             ForceOrdering ordering, const PhysicalConstants& constants) {
  return correlation_amplitude(gamma_sp, photon_occupancy(omega, temperature, constants).nbar,
                               ordering);
}

namespace {

struct FluxPrefactors {
  double potential;
  double kinetic;
  double interchange;
};

FluxPrefactors prefactors(const TransitionSpec& t) {
  const double amp2 = t.x0 * t.x0;
  const double m2w2 = t.mu * t.mu * t.omega0 * t.omega0;
  return {0.5 * m2w2 * t.omega0 * t.omega0 * amp2, 0.5 * m2w2 * amp2,
          -0.5 * m2w2 * t.omega0 * amp2};
}

template <class F>
std::vector<double> evaluate(const FrequencyGrid& grid, F&& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
  return out;
}

}  // namespace

double positional_noise_flux(double omega, const TransitionSpec& t) {
  const double a = omega * (omega - 2.0 * t.omega_vib);
  const double u = omega - t.omega_vib;
  const double g = t.gamma_sp;
  const double denom = a * a + 4.0 * g * g * u * u;
  return g / (std::numbers::pi * t.mu * t.mu) / denom;
}

double potential_noise_flux(double omega, const TransitionSpec& t) {
  return prefactors(t).potential * positional_noise_flux(omega, t);
}

double kinetic_noise_flux(double omega, const TransitionSpec& t) {
  const double u = omega - t.omega_vib;
  return prefactors(t).kinetic * u * u * positional_noise_flux(omega, t);
}

double interchange_noise_flux(double omega, const TransitionSpec& t) {
  const double u = omega - t.omega_vib;
  const double nuk = prefactors(t).interchange * u * positional_noise_flux(omega, t);
  return nuk == 0.0 ? 0.0 : nuk;  // no -0 at omega_vib
}

double spontaneous_emission_flux(double omega, const TransitionSpec& t) {
  const double uk = interchange_noise_flux(omega, t);
  return potential_noise_flux(omega, t) + kinetic_noise_flux(omega, t) + uk + uk;
}

double spontaneous_emission_flux_factored(double omega, const TransitionSpec& t) {
  const double d = t.omega0 - (omega - t.omega_vib);
  return prefactors(t).kinetic * d * d * positional_noise_flux(omega, t);
}

std::vector<double> positional_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t) {
  return evaluate(grid, [&](double w) { return positional_noise_flux(w, t); });
}
std::vector<double> potential_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t) {
  return evaluate(grid, [&](double w) { return potential_noise_flux(w, t); });
}
std::vector<double> kinetic_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t) {
  return evaluate(grid, [&](double w) { return kinetic_noise_flux(w, t); });
}
std::vector<double> interchange_noise_flux(const FrequencyGrid& grid, const TransitionSpec& t) {
  return evaluate(grid, [&](double w) { return interchange_noise_flux(w, t); });
}
std::vector<double> spontaneous_emission_flux(const FrequencyGrid& grid,
                                              const TransitionSpec& t) {
  return evaluate(grid, [&](double w) { return spontaneous_emission_flux(w, t); });
}

NoiseSpectra compute_noise_spectra(const FrequencyGrid& grid, const TransitionSpec& t,
                                   unsigned threads) {
  t.validate();
  const std::size_t n = grid.size();
  NoiseSpectra s{grid, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                 std::vector<double>(n), std::vector<double>(n)};
  const auto pre = prefactors(t);
  parallel_for(n, threads, [&](std::size_t i) {
    const double w = grid[i];
    const double u = w - t.omega_vib;
    const double nx = positional_noise_flux(w, t);
    const double nu = pre.potential * nx;
    const double nk = pre.kinetic * u * u * nx;
    double nuk = pre.interchange * u * nx;
    if (nuk == 0.0) nuk = 0.0;
    s.n_x[i] = nx;
    s.n_u[i] = nu;
    s.n_k[i] = nk;
    s.n_uk[i] = nuk;
    s.n_sp[i] = nu + nk + nuk + nuk;
  });
  return s;
}

}  // namespace atomflux

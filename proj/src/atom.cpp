#include "atomflux/atom.hpp"

#include "atomflux/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace atomflux {

AtomSpec::AtomSpec(int Z, double nuclear_mass, const PhysicalConstants& constants)
    : Z_(Z), nuclear_mass_(nuclear_mass) {
  if (Z < 1) throw ConfigError("atomic number must be ≥ 1");
  if (!std::isfinite(nuclear_mass) || nuclear_mass <= 0.0) {
    throw ConfigError("nuclear mass must be finite and > 0");
  }
  constants.validate();
  reduced_mass_ = constants.m_e * nuclear_mass / (constants.m_e + nuclear_mass);
}

AtomSpec AtomSpec::hydrogen(const PhysicalConstants& constants) {
  return AtomSpec(1, constants.m_p, constants);
}

AtomSpec AtomSpec::with_reduced_mass(double mu) const {
  if (!std::isfinite(mu) || mu <= 0.0) throw ConfigError("reduced mass must be > 0");
  AtomSpec copy = *this;
  copy.reduced_mass_ = mu;
  return copy;
}

double rest_coupling_energy(const AtomSpec& atom, const PhysicalConstants& constants) {
  const double z_alpha = atom.Z() * constants.alpha;
  return atom.reduced_mass() * constants.c * constants.c * z_alpha * z_alpha;
}

double fundamental_frequency(const AtomSpec& atom, const PhysicalConstants& constants) {
  return rest_coupling_energy(atom, constants) / constants.hbar;
}

double vibrational_frequency(const AtomSpec& atom, int n, const PhysicalConstants& constants) {
  if (n < 1) throw ConfigError("level n must be >= 1, got " + std::to_string(n));
  const double n3 = static_cast<double>(n) * n * n;
  return fundamental_frequency(atom, constants) / n3;
}

SecondOrderFrequency second_order_vibrational_frequency(double omega0, double n) {
  if (!(n >= 1.0)) throw ConfigError("level n must be >= 1");
  return {(4.0 - 3.0 * n) * omega0, 3.0 * omega0};
}

VibrationalLadder::VibrationalLadder(const AtomSpec& atom, const PhysicalConstants& constants)
    : omega0_(fundamental_frequency(atom, constants)) {}

double VibrationalLadder::omega_vib(int n) const {
  if (n < 1) throw ConfigError("level n must be >= 1, got " + std::to_string(n));
  const double n3 = static_cast<double>(n) * n * n;
  return omega0_ / n3;
}

double energy_closed_form(const AtomSpec& atom, double n, const PhysicalConstants& constants) {
  if (!(n > 0.0)) throw ConfigError("level n must be > 0");
  return -0.5 * rest_coupling_energy(atom, constants) / (n * n);
}

SeriesTruncation series_coefficients(const AtomSpec& atom, int k_max,
                                     const PhysicalConstants& constants) {
  if (k_max < 0) throw ConfigError("truncation order must be >= 0");
  const double scale = 0.5 * rest_coupling_energy(atom, constants);
  SeriesTruncation series;
  series.k_max = k_max;
  series.coefficients.reserve(static_cast<std::size_t>(k_max) + 1);
  double sign = -1.0;
  for (int k = 0; k <= k_max; ++k) {
    series.coefficients.push_back(scale * sign * (k + 1));
    sign = -sign;
  }
  return series;
}

SeriesEvaluation energy_series_partial_sum(const AtomSpec& atom, double n, int k_max,
                                           const PhysicalConstants& constants,
                                           double tolerance) {
  if (k_max < 0) throw ConfigError("truncation order must be >= 0");
  const double x = n - 1.0;
  // sum_k (-1)^{k+1} (k+1) x^k, with power = (-x)^k carrying the alternation
  double sum = 0.0;
  double last = 0.0;
  double power = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    last = -(k + 1) * power;
    sum += last;
    power *= -x;
  }
  SeriesEvaluation result;
  result.value = 0.5 * rest_coupling_energy(atom, constants) * sum;
  result.last_term_ratio = sum != 0.0 ? std::abs(last / sum) : std::abs(last);
  result.within_radius = std::abs(x) < 1.0;
  // term ratios beyond k_max are bounded by q, so the remainder by |last| q / (1 - q)
  const double q = std::abs(x) * (k_max + 2.0) / (k_max + 1.0);
  result.tail_ratio = q < 1.0 ? result.last_term_ratio * q / (1.0 - q)
                              : std::numeric_limits<double>::infinity();
  // at n = 1 only the k = 0 term survives and the sum is exact
  result.converged = x == 0.0 || (result.within_radius && result.tail_ratio <= tolerance);
  return result;
}

}  // namespace atomflux

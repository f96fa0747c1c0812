#pragma once

#include "atomflux/constants.hpp"

#include <vector>

namespace atomflux {

/// Identity of a hydrogen-like two-body system.
class AtomSpec {
 public:
  /// Throws ConfigError for Z < 1 or a non-positive nuclear mass.
  AtomSpec(int Z, double nuclear_mass, const PhysicalConstants& constants = codata2018);

  static AtomSpec hydrogen(const PhysicalConstants& constants = codata2018);

  int Z() const noexcept { return Z_; }
  double nuclear_mass() const noexcept { return nuclear_mass_; }
  /// m_e M / (m_e + M).
  double reduced_mass() const noexcept { return reduced_mass_; }

  /// Same nucleus charge, reduced mass overridden (used for scaling checks).
  AtomSpec with_reduced_mass(double mu) const;

 private:
  int Z_;
  double nuclear_mass_;
  double reduced_mass_;
};

/// mu c^2 (Z alpha)^2, the energy scale shared by the series and the ladder.
double rest_coupling_energy(const AtomSpec& atom, const PhysicalConstants& constants = codata2018);

/// omega_0 = mu c^2 (Z alpha)^2 / hbar in rad/s.
double fundamental_frequency(const AtomSpec& atom, const PhysicalConstants& constants = codata2018);

/// omega_0 / n^3. Throws ConfigError for n < 1.
double vibrational_frequency(const AtomSpec& atom, int n,
                             const PhysicalConstants& constants = codata2018);

/// Result of truncating the Hamiltonian series at second order.
struct SecondOrderFrequency {
  double omega;  // (4 - 3n) omega_0, may be negative for n > 4/3
  double beta2;  // 3 omega_0, the discarded phase term; never applied
};

/// (4 - 3n) omega_0. Real n is accepted for Taylor-consistency checks;
/// throws ConfigError for n < 1.
SecondOrderFrequency second_order_vibrational_frequency(double omega0, double n);

/// The frequency ladder of one atom, cached.
class VibrationalLadder {
 public:
  explicit VibrationalLadder(const AtomSpec& atom,
                             const PhysicalConstants& constants = codata2018);

  double omega0() const noexcept { return omega0_; }
  double omega_vib(int n) const;
  SecondOrderFrequency second_order(double n) const {
    return second_order_vibrational_frequency(omega0_, n);
  }
  double beta2() const noexcept { return 3.0 * omega0_; }

 private:
  double omega0_;
};

/// -0.5 mu c^2 (Z alpha)^2 / n^2 in joules. Throws ConfigError for n <= 0.
double energy_closed_form(const AtomSpec& atom, double n,
                          const PhysicalConstants& constants = codata2018);

/// Expansion coefficients c_k = 0.5 mu c^2 (Z alpha)^2 (-1)^{k+1} (k+1),
/// k = 0..k_max, multiplying (n-1)^k.
struct SeriesTruncation {
  int k_max = 0;
  std::vector<double> coefficients;
};

SeriesTruncation series_coefficients(const AtomSpec& atom, int k_max,
                                     const PhysicalConstants& constants = codata2018);

struct SeriesEvaluation {
  double value = 0.0;            // partial sum in joules
  double last_term_ratio = 0.0;  // |last retained term| / |partial sum|
  double tail_ratio = 0.0;       // bound on |omitted remainder| / |partial sum|
  bool within_radius = false;    // |n - 1| < 1
  bool converged = false;
};

/// Partial sum of the energy expansion about n = 1 up to and including k_max.
/// Divergence outside |n - 1| < 1 is reported through the flags, not thrown.
/// `tolerance` bounds tail_ratio for the converged flag.
SeriesEvaluation energy_series_partial_sum(const AtomSpec& atom, double n, int k_max,
                                           const PhysicalConstants& constants = codata2018,
                                           double tolerance = 1e-8);

}  // namespace atomflux

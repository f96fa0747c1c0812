#pragma once

#include <optional>
#include <string_view>

namespace atomflux {

/// SI physical constants. Defaults are the CODATA 2018 recommended values
/// (hbar, c, k_B exact by the 2019 SI redefinition).
struct PhysicalConstants {
  double hbar = 1.054571817e-34;      // J s
  double c = 299792458.0;             // m/s
  double alpha = 7.2973525693e-3;     // fine-structure constant
  double k_B = 1.380649e-23;          // J/K
  double m_e = 9.1093837015e-31;      // kg
  double m_p = 1.67262192369e-27;     // kg

  /// Throws ConfigError unless every constant is finite and positive.
  void validate() const;
};

inline constexpr PhysicalConstants codata2018{};

/// Built-in nuclear masses (CODATA 2018 proton, deuteron, alpha-particle).
struct Isotope {
  std::string_view name;
  int Z;
  double nuclear_mass;  // kg
};

inline constexpr Isotope kIsotopes[] = {
    {"H-1", 1, 1.67262192369e-27},
    {"D-2", 1, 3.3435837724e-27},
    {"He-4", 2, 6.6446573357e-27},
};

std::optional<Isotope> find_isotope(std::string_view name);

}  // namespace atomflux

#include "atomflux/constants.hpp"

#include "atomflux/errors.hpp"

#include <cmath>
#include <string>

namespace atomflux {

void PhysicalConstants::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"hbar", hbar}, {"c", c}, {"alpha", alpha}, {"k_B", k_B}, {"m_e", m_e}, {"m_p", m_p}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value) || value <= 0.0) {
      throw ConfigError(std::string("physical constant ") + name + " must be finite and > 0");
    }
  }
}

std::optional<Isotope> find_isotope(std::string_view name) {
  for (const auto& iso : kIsotopes) {
    if (iso.name == name) return iso;
  }
  return std::nullopt;
}

}  // namespace atomflux

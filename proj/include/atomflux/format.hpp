#pragma once

#include "atomflux/psd.hpp"
#include "atomflux/spectra.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace atomflux {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Header `omega,n_x,n_u,n_k,n_uk,n_sp`, LF line endings.
void write_spectra_csv(std::ostream& out, const NoiseSpectra& spectra);
/// Header `omega,s_xx,stderr`.
void write_psd_csv(std::ostream& out, const PsdEstimate& psd);

nlohmann::json spectra_to_json(const NoiseSpectra& spectra);
NoiseSpectra spectra_from_json(const nlohmann::json& doc);

/// Parses a CSV written by write_spectra_csv or write_psd_csv into columns.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};
CsvTable read_csv(std::istream& in);

}  // namespace atomflux

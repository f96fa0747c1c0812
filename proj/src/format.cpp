#include "atomflux/format.hpp"

#include "atomflux/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace atomflux {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw IoError("number formatting failed");
  return std::string(buf.data(), ptr);
}

void write_spectra_csv(std::ostream& out, const NoiseSpectra& s) {
  out << "omega,n_x,n_u,n_k,n_uk,n_sp\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    out << format_double(s.grid[i]) << ',' << format_double(s.n_x[i]) << ','
        << format_double(s.n_u[i]) << ',' << format_double(s.n_k[i]) << ','
        << format_double(s.n_uk[i]) << ',' << format_double(s.n_sp[i]) << '\n';
  }
}

void write_psd_csv(std::ostream& out, const PsdEstimate& psd) {
  out << "omega,s_xx,stderr\n";
  for (std::size_t k = 0; k < psd.s_xx.size(); ++k) {
    out << format_double(psd.grid[k]) << ',' << format_double(psd.s_xx[k]) << ','
        << format_double(psd.standard_error[k]) << '\n';
  }
}

nlohmann::json spectra_to_json(const NoiseSpectra& s) {
  const auto omegas = s.grid.omegas();
  return {
      {"schema", "atomflux.spectra"},
      {"schema_version", kSchemaVersion},
      {"units", std::string(to_string(s.grid.units()))},
      {"omega", std::vector<double>(omegas.begin(), omegas.end())},
      {"n_x", s.n_x},
      {"n_u", s.n_u},
      {"n_k", s.n_k},
      {"n_uk", s.n_uk},
      {"n_sp", s.n_sp},
  };
}

NoiseSpectra spectra_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema").get<std::string>() != "atomflux.spectra") {
      throw IoError("not an atomflux.spectra document");
    }
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw IoError("unsupported spectra schema version");
    }
    NoiseSpectra s{FrequencyGrid(doc.at("omega").get<std::vector<double>>(),
                                 parse_unit_system(doc.at("units").get<std::string>())),
                   doc.at("n_x").get<std::vector<double>>(),
                   doc.at("n_u").get<std::vector<double>>(),
                   doc.at("n_k").get<std::vector<double>>(),
                   doc.at("n_uk").get<std::vector<double>>(),
                   doc.at("n_sp").get<std::vector<double>>()};
    const std::size_t n = s.grid.size();
    for (const auto* col : {&s.n_x, &s.n_u, &s.n_k, &s.n_uk, &s.n_sp}) {
      if (col->size() != n) throw IoError("spectra columns differ in length");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed spectra document: ") + e.what());
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::size_t col = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end && col < table.header.size()) {
      const char* comma = std::find(p, end, ',');
      double value = 0.0;
      const auto [q, ec] = std::from_chars(p, comma, value);
      if (ec != std::errc{} || q != comma) {
        throw IoError("bad number in CSV row " + std::to_string(row));
      }
      table.columns[col++].push_back(value);
      p = comma + 1;
    }
    if (col != table.header.size()) throw IoError("short CSV row " + std::to_string(row));
  }
  return table;
}

}  // namespace atomflux

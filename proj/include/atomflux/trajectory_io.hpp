#pragma once

#include "atomflux/langevin.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace atomflux {

// Raw trajectory dump layout, all integers and floats little-endian:
//   8 bytes   magic "ATFXTRJ1"
//   u32       length of the JSON header
//   bytes     JSON echo of the SimConfig
//   u64       ensemble count
//   u64       samples per ensemble
//   f64[]     per ensemble, interleaved (x, v) pairs

struct TrajectoryDump {
  std::string header_json;
  std::vector<Trajectory> trajectories;
};

std::string sim_config_json(const SimConfig& cfg);

/// Throws IoError when the file cannot be written.
void write_trajectory_dump(const std::filesystem::path& path, const SimConfig& cfg,
                           std::span<const Trajectory> trajectories);
/// Throws IoError on a missing file or malformed layout.
TrajectoryDump read_trajectory_dump(const std::filesystem::path& path);

}  // namespace atomflux

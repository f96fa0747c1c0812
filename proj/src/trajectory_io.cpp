#include "atomflux/trajectory_io.hpp"

#include "atomflux/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>

namespace atomflux {

namespace {

constexpr char kMagic[8] = {'A', 'T', 'F', 'X', 'T', 'R', 'J', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw IoError("truncated trajectory dump");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

std::string sim_config_json(const SimConfig& cfg) {
  const nlohmann::json doc = {
      {"omega_vib", cfg.omega_vib},
      {"gamma_sp", cfg.gamma_sp},
      {"mu", cfg.mu},
      {"dt", cfg.dt},
      {"n_steps", cfg.n_steps},
      {"n_ensembles", cfg.n_ensembles},
      {"seed", cfg.seed},
      {"burn_in", cfg.effective_burn_in()},
      {"integrator", std::string(to_string(cfg.integrator))},
      {"welch",
       {{"segment_length", cfg.welch.segment_length},
        {"overlap_fraction", cfg.welch.overlap_fraction},
        {"window", "hann"}}},
  };
  return doc.dump();
}

void write_trajectory_dump(const std::filesystem::path& path, const SimConfig& cfg,
                           std::span<const Trajectory> trajectories) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string header = sim_config_json(cfg);
  out.write(kMagic, sizeof(kMagic));
  put_le(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  const std::uint64_t samples = trajectories.empty() ? 0 : trajectories.front().x.size();
  put_le(out, static_cast<std::uint64_t>(trajectories.size()));
  put_le(out, samples);
  for (const auto& traj : trajectories) {
    if (traj.x.size() != samples || traj.v.size() != samples) {
      throw IoError("trajectories differ in length");
    }
    for (std::size_t i = 0; i < samples; ++i) {
      put_le(out, traj.x[i]);
      put_le(out, traj.v[i]);
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

TrajectoryDump read_trajectory_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a trajectory dump: " + path.string());
  }
  TrajectoryDump dump;
  const auto header_len = get_le<std::uint32_t>(in);
  dump.header_json.resize(header_len);
  if (!in.read(dump.header_json.data(), header_len)) throw IoError("truncated trajectory dump");
  const auto ensembles = get_le<std::uint64_t>(in);
  const auto samples = get_le<std::uint64_t>(in);
  dump.trajectories.resize(ensembles);
  for (auto& traj : dump.trajectories) {
    traj.x.resize(samples);
    traj.v.resize(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
      traj.x[i] = get_le<double>(in);
      traj.v[i] = get_le<double>(in);
    }
  }
  return dump;
}

}  // namespace atomflux

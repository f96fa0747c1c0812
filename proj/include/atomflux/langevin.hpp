#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace atomflux {

enum class Integrator {
  // v += (-2 gamma v - w^2 x) dt + dW; x += v dt (with the updated v).
  semi_implicit_euler,
  // x and v both advanced from the old state.
  explicit_euler,
  // Exact transition matrix and Gaussian covariance of one step.
  exact,
};

std::string_view to_string(Integrator integrator) noexcept;
Integrator parse_integrator(std::string_view text);

struct WelchSettings {
  std::size_t segment_length = 65536;
  double overlap_fraction = 0.5;  // Hann window
};

/// Parameters of the time-domain Langevin oracle, normalized units by default.
struct SimConfig {
  double omega_vib = 1.0;
  double gamma_sp = 0.05;
  double mu = 1.0;
  double dt = 0.02;
  std::size_t n_steps = 524288;  // recorded samples per ensemble
  std::size_t n_ensembles = 200;
  std::uint64_t seed = 42;
  std::optional<std::size_t> burn_in;  // defaults to ceil(10 / (gamma dt))
  WelchSettings welch;
  Integrator integrator = Integrator::semi_implicit_euler;
  std::array<double, 2> initial_state{0.0, 0.0};  // (x, v)

  /// Throws ConfigError naming the violated guard.
  void validate() const;
  std::size_t effective_burn_in() const;
  /// White-noise intensity of the Langevin force, q = 2 gamma.
  double noise_intensity() const noexcept { return 2.0 * gamma_sp; }
};

struct Trajectory {
  std::vector<double> x;
  std::vector<double> v;
};

/// One step of the linear SDE dx = v dt, dv = (-2 gamma v - w^2 x) dt + dGamma / mu,
/// with <dGamma^2> = q dt.
class LangevinStepper {
 public:
  explicit LangevinStepper(const SimConfig& cfg);

  /// Standard normal draws consumed per step (1, or 2 for the exact scheme).
  std::size_t normals_per_step() const noexcept {
    return integrator_ == Integrator::exact ? 2 : 1;
  }

  void step(double& x, double& v, std::span<const double> normals) const noexcept;

 private:
  Integrator integrator_;
  double dt_;
  double omega2_;
  double two_gamma_;
  double kick_;  // sqrt(q dt) / mu
  // exact scheme
  std::array<double, 4> phi_{};   // row-major transition matrix
  std::array<double, 3> chol_{};  // l00, l10, l11 of the step covariance
};

/// Private, reproducible RNG stream of one ensemble member.
std::mt19937_64 ensemble_engine(std::uint64_t seed, std::size_t ensemble_index);

/// Integrates one ensemble member from cfg.initial_state, discards the
/// burn-in and returns n_steps samples.
Trajectory integrate_langevin(const SimConfig& cfg, std::size_t ensemble_index = 0);

/// Same dynamics driven by caller-supplied standard normals
/// ((burn_in + n_steps) * normals_per_step values), for coupled-path tests.
Trajectory integrate_langevin(const SimConfig& cfg, std::span<const double> normals);

/// All ensemble members, computed on up to `threads` workers.
std::vector<Trajectory> integrate_ensembles(const SimConfig& cfg, unsigned threads = 1);

}  // namespace atomflux

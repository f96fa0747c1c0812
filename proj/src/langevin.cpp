#include "atomflux/langevin.hpp"

#include "atomflux/errors.hpp"
#include "atomflux/parallel.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace atomflux {

std::string_view to_string(Integrator integrator) noexcept {
  switch (integrator) {
    case Integrator::semi_implicit_euler: return "semi-implicit-euler";
    case Integrator::explicit_euler: return "explicit-euler";
    case Integrator::exact: return "exact";
  }
  return "unknown";
}

Integrator parse_integrator(std::string_view text) {
  if (text == "semi-implicit-euler") return Integrator::semi_implicit_euler;
  if (text == "explicit-euler") return Integrator::explicit_euler;
  if (text == "exact") return Integrator::exact;
  throw ConfigError("unknown integrator '" + std::string(text) +
                    "' (expected semi-implicit-euler, explicit-euler or exact)");
}

void SimConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(omega_vib)) throw ConfigError("sim omega_vib must be > 0");
  if (!positive(mu)) throw ConfigError("sim mu must be > 0");
  if (!positive(dt)) throw ConfigError("sim dt must be > 0");
  if (!std::isfinite(gamma_sp) || gamma_sp < 0.0) throw ConfigError("sim gamma_sp must be >= 0");
  if (dt * omega_vib > 0.05) {
    throw ConfigError("resolution guard: dt * omega_vib = " + std::to_string(dt * omega_vib) +
                      " exceeds 0.05");
  }
  if (gamma_sp * dt > 0.01) {
    throw ConfigError("resolution guard: gamma_sp * dt = " + std::to_string(gamma_sp * dt) +
                      " exceeds 0.01");
  }
  if (welch.segment_length < 16) throw ConfigError("Welch segment length must be >= 16");
  if (!(welch.overlap_fraction >= 0.0 && welch.overlap_fraction < 1.0)) {
    throw ConfigError("Welch overlap fraction must lie in [0, 1)");
  }
  if (n_steps < 4 * welch.segment_length) {
    throw ConfigError("n_steps must be >= 4 * segment_length");
  }
  if (n_ensembles < 1) throw ConfigError("n_ensembles must be >= 1");
  if (!std::isfinite(initial_state[0]) || !std::isfinite(initial_state[1])) {
    throw ConfigError("initial state must be finite");
  }
}

std::size_t SimConfig::effective_burn_in() const {
  if (burn_in) return *burn_in;
  if (gamma_sp <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(10.0 / (gamma_sp * dt)));
}

LangevinStepper::LangevinStepper(const SimConfig& cfg)
    : integrator_(cfg.integrator),
      dt_(cfg.dt),
      omega2_(cfg.omega_vib * cfg.omega_vib),
      two_gamma_(2.0 * cfg.gamma_sp),
      kick_(std::sqrt(cfg.noise_intensity() * cfg.dt) / cfg.mu) {
  if (integrator_ != Integrator::exact) return;
  // Van Loan: exp([[-A, G G^T], [0, A^T]] dt) holds Phi^T and Phi^{-1} Q.
  Eigen::Matrix2d a;
  a << 0.0, 1.0, -omega2_, -two_gamma_;
  Eigen::Matrix2d ggt = Eigen::Matrix2d::Zero();
  ggt(1, 1) = cfg.noise_intensity() / (cfg.mu * cfg.mu);
  Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
  block.topLeftCorner<2, 2>() = -a * dt_;
  block.topRightCorner<2, 2>() = ggt * dt_;
  block.bottomRightCorner<2, 2>() = a.transpose() * dt_;
  const Eigen::Matrix4d e = block.exp();
  const Eigen::Matrix2d phi = e.bottomRightCorner<2, 2>().transpose();
  Eigen::Matrix2d q = phi * e.topRightCorner<2, 2>();
  q = 0.5 * (q + q.transpose());
  phi_ = {phi(0, 0), phi(0, 1), phi(1, 0), phi(1, 1)};
  const double l00 = q(0, 0) > 0.0 ? std::sqrt(q(0, 0)) : 0.0;
  const double l10 = l00 > 0.0 ? q(1, 0) / l00 : 0.0;
  const double rest = q(1, 1) - l10 * l10;
  chol_ = {l00, l10, rest > 0.0 ? std::sqrt(rest) : 0.0};
}

void LangevinStepper::step(double& x, double& v, std::span<const double> normals) const noexcept {
  switch (integrator_) {
    case Integrator::semi_implicit_euler:
      v += (-two_gamma_ * v - omega2_ * x) * dt_ + kick_ * normals[0];
      x += v * dt_;
      break;
    case Integrator::explicit_euler: {
      const double vn = v + (-two_gamma_ * v - omega2_ * x) * dt_ + kick_ * normals[0];
      x += v * dt_;
      v = vn;
      break;
    }
    case Integrator::exact: {
      const double xn = phi_[0] * x + phi_[1] * v + chol_[0] * normals[0];
      const double vn = phi_[2] * x + phi_[3] * v + chol_[1] * normals[0] + chol_[2] * normals[1];
      x = xn;
      v = vn;
      break;
    }
  }
}

std::mt19937_64 ensemble_engine(std::uint64_t seed, std::size_t ensemble_index) {
  const auto idx = static_cast<std::uint64_t>(ensemble_index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  return std::mt19937_64(seq);
}

namespace {

template <class NextNormals>
Trajectory run(const SimConfig& cfg, NextNormals&& next) {
  cfg.validate();
  const LangevinStepper stepper(cfg);
  const std::size_t burn = cfg.effective_burn_in();
  double x = cfg.initial_state[0];
  double v = cfg.initial_state[1];
  for (std::size_t i = 0; i < burn; ++i) stepper.step(x, v, next());
  Trajectory traj;
  traj.x.resize(cfg.n_steps);
  traj.v.resize(cfg.n_steps);
  for (std::size_t i = 0; i < cfg.n_steps; ++i) {
    stepper.step(x, v, next());
    traj.x[i] = x;
    traj.v[i] = v;
  }
  return traj;
}

}  // namespace

Trajectory integrate_langevin(const SimConfig& cfg, std::size_t ensemble_index) {
  auto engine = ensemble_engine(cfg.seed, ensemble_index);
  std::normal_distribution<double> normal;
  std::array<double, 2> buf{};
  const std::size_t per_step = cfg.integrator == Integrator::exact ? 2 : 1;
  return run(cfg, [&]() -> std::span<const double> {
    for (std::size_t k = 0; k < per_step; ++k) buf[k] = normal(engine);
    return {buf.data(), per_step};
  });
}

Trajectory integrate_langevin(const SimConfig& cfg, std::span<const double> normals) {
  const std::size_t per_step = cfg.integrator == Integrator::exact ? 2 : 1;
  if (normals.size() < (cfg.effective_burn_in() + cfg.n_steps) * per_step) {
    throw ConfigError("not enough normal draws for the configured steps");
  }
  std::size_t offset = 0;
  return run(cfg, [&]() -> std::span<const double> {
    const auto s = normals.subspan(offset, per_step);
    offset += per_step;
    return s;
  });
}

std::vector<Trajectory> integrate_ensembles(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<Trajectory> out(cfg.n_ensembles);
  parallel_for(cfg.n_ensembles, threads,
               [&](std::size_t e) { out[e] = integrate_langevin(cfg, e); });
  return out;
}

}  // namespace atomflux

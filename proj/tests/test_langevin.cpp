#include "atomflux/errors.hpp"
#include "atomflux/langevin.hpp"
#include "atomflux/psd.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

using namespace atomflux;

namespace {

// Integral of (g / pi mu^2) |D(w)|^2 over the real line, via w = w_v tan(theta)
// and composite Simpson on (0, pi/2). Independent of the closed form.
double quadrature_variance(double wv, double g, double mu) {
  const std::size_t n = 200000;
  const double h = (std::numbers::pi / 2) / n;
  auto f = [&](double th) {
    if (th >= std::numbers::pi / 2) return 0.0;
    const double w = wv * std::tan(th);
    const double jac = wv / (std::cos(th) * std::cos(th));
    const double re = wv * wv - w * w;
    return g / (std::numbers::pi * mu * mu) / (re * re + 4 * g * g * w * w) * jac;
  };
  double s = f(0.0) + f(std::numbers::pi / 2);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 2.0 * s * h / 3.0;
}

double energy(double x, double v, double w) { return 0.5 * v * v + 0.5 * w * w * x * x; }

double max_energy_drift(Integrator integrator, double dt, std::size_t steps) {
  SimConfig cfg;
  cfg.gamma_sp = 0.0;
  cfg.dt = dt;
  cfg.n_steps = steps;
  cfg.welch.segment_length = 16;
  cfg.integrator = integrator;
  cfg.initial_state = {1.0, 0.0};
  const auto traj = integrate_langevin(cfg);
  const double e0 = energy(1.0, 0.0, 1.0);
  double drift = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    drift = std::max(drift, std::abs(energy(traj.x[i], traj.v[i], 1.0) - e0));
  }
  return drift;
}

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_steps = 1 << 15;
  cfg.n_ensembles = 4;
  cfg.welch.segment_length = 4096;
  return cfg;
}

}  // namespace

TEST(SimConfig, DefaultsAreValid) {
  const SimConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.effective_burn_in(), 10000u);
  EXPECT_DOUBLE_EQ(cfg.noise_intensity(), 0.1);
}

TEST(SimConfig, Guards) {
  SimConfig cfg;
  cfg.dt = 0.06;
  try {
    cfg.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("resolution guard"), std::string::npos);
  }
  cfg = SimConfig{};
  cfg.gamma_sp = 0.6;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.welch.segment_length = 8;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.welch.overlap_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.n_steps = 3 * cfg.welch.segment_length;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.n_ensembles = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(parse_integrator("rk4"), ConfigError);
  for (auto i : {Integrator::semi_implicit_euler, Integrator::explicit_euler, Integrator::exact}) {
    EXPECT_EQ(parse_integrator(to_string(i)), i);
  }
}

TEST(Stepper, ExactPropagatorConservesEnergyWithoutDamping) {
  EXPECT_LT(max_energy_drift(Integrator::exact, 0.02, 4096), 1e-12);
}

TEST(Stepper, EulerSchemesAreFirstOrder) {
  for (auto scheme : {Integrator::semi_implicit_euler, Integrator::explicit_euler}) {
    const double coarse = max_energy_drift(scheme, 0.002, 4096);
    const double fine = max_energy_drift(scheme, 0.001, 8192);
    EXPECT_NEAR(coarse / fine, 2.0, 0.1) << to_string(scheme);
  }
}

TEST(Stepper, ExactSchemeDrawsTwoNormals) {
  SimConfig cfg;
  cfg.integrator = Integrator::exact;
  EXPECT_EQ(LangevinStepper(cfg).normals_per_step(), 2u);
  cfg.integrator = Integrator::explicit_euler;
  EXPECT_EQ(LangevinStepper(cfg).normals_per_step(), 1u);
}

TEST(Ensembles, StationaryVarianceMatchesQuadrature) {
  const double oracle = quadrature_variance(1.0, 0.05, 1.0);
  ASSERT_NEAR(oracle, 0.5, 1e-9);
  for (auto scheme : {Integrator::semi_implicit_euler, Integrator::exact}) {
    SimConfig cfg = small_config();
    cfg.n_steps = 1 << 17;
    cfg.n_ensembles = 16;
    cfg.integrator = scheme;
    const auto trajs = integrate_ensembles(cfg);
    std::vector<double> vars;
    for (const auto& t : trajs) {
      const double m = std::accumulate(t.x.begin(), t.x.end(), 0.0) / t.x.size();
      double s = 0.0;
      for (double x : t.x) s += (x - m) * (x - m);
      vars.push_back(s / (t.x.size() - 1));
    }
    const double mean = std::accumulate(vars.begin(), vars.end(), 0.0) / vars.size();
    double ss = 0.0;
    for (double v : vars) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (vars.size() - 1) / vars.size());
    EXPECT_LT(std::abs(mean - oracle), 3.0 * se) << to_string(scheme) << " " << mean << " " << se;
  }
}

TEST(Ensembles, DeterministicAcrossThreads) {
  const auto cfg = small_config();
  const auto one = integrate_ensembles(cfg, 1);
  const auto three = integrate_ensembles(cfg, 3);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t e = 0; e < one.size(); ++e) {
    EXPECT_EQ(one[e].x, three[e].x);
    EXPECT_EQ(one[e].v, three[e].v);
  }
  EXPECT_EQ(integrate_langevin(cfg, 2).x, one[2].x);
  EXPECT_NE(one[0].x, one[1].x);
  auto other = cfg;
  other.seed = 43;
  EXPECT_NE(integrate_langevin(other, 0).x, one[0].x);
}

TEST(Ensembles, EngineStreamsAreDistinct) {
  auto a = ensemble_engine(42, 0);
  auto b = ensemble_engine(42, 1);
  auto c = ensemble_engine(42, 0);
  const auto ra = a();
  EXPECT_NE(ra, b());
  EXPECT_EQ(ra, c());
}

TEST(Ensembles, QuartersAreStationary) {
  SimConfig cfg = small_config();
  cfg.gamma_sp = 0.2;
  cfg.n_steps = 1 << 17;
  cfg.n_ensembles = 16;
  const auto trajs = integrate_ensembles(cfg);
  const std::size_t q = cfg.n_steps / 4;
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> ms;
    for (const auto& t : trajs) {
      double s = 0.0;
      for (std::size_t i = k * q; i < (k + 1) * q; ++i) s += t.x[i] * t.x[i];
      ms.push_back(s / q);
    }
    const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
    double ss = 0.0;
    for (double m : ms) ss += (m - mean) * (m - mean);
    const double se = std::sqrt(ss / (ms.size() - 1) / ms.size());
    EXPECT_LT(std::abs(mean - 0.5), 4.0 * se) << "quarter " << k;
  }
}

TEST(Ensembles, SuppliedNormalsMustCoverRun) {
  SimConfig cfg = small_config();
  cfg.burn_in = 0;
  std::vector<double> z(cfg.n_steps - 1, 0.0);
  EXPECT_THROW(integrate_langevin(cfg, z), ConfigError);
}

// Same Brownian path at dt and dt/2: the coarse increments are the pairwise
// sums of the fine ones. Halving dt moves the spectral peak by well under 1%.
TEST(Ensembles, CoupledPathsConvergeUnderRefinement) {
  SimConfig coarse;
  coarse.n_steps = 1 << 17;
  coarse.burn_in = 10000;
  coarse.welch.segment_length = 8192;
  SimConfig fine = coarse;
  fine.dt = coarse.dt / 2;
  fine.n_steps = 2 * coarse.n_steps;
  fine.burn_in = 2 * *coarse.burn_in;

  const WelchEstimator welch(coarse.dt, coarse.welch);
  std::vector<SeriesPeriodogram> pc, pf;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  for (int e = 0; e < 4; ++e) {
    std::vector<double> zf(*fine.burn_in + fine.n_steps);
    for (double& z : zf) z = normal(rng);
    std::vector<double> zc(zf.size() / 2);
    for (std::size_t i = 0; i < zc.size(); ++i) {
      zc[i] = (zf[2 * i] + zf[2 * i + 1]) / std::numbers::sqrt2;
    }
    const auto tc = integrate_langevin(coarse, zc);
    const auto tf = integrate_langevin(fine, zf);
    std::vector<double> sub(coarse.n_steps);
    for (std::size_t i = 0; i < sub.size(); ++i) sub[i] = tf.x[2 * i + 1];
    pc.push_back(welch.periodogram(tc.x));
    pf.push_back(welch.periodogram(sub));
  }
  const auto sc = welch.combine(pc);
  const auto sf = welch.combine(pf);
  const double peak_c = *std::max_element(sc.s_xx.begin(), sc.s_xx.end());
  const double peak_f = *std::max_element(sf.s_xx.begin(), sf.s_xx.end());
  EXPECT_LT(std::abs(peak_c / peak_f - 1.0), 0.01);
}

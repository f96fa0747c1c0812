#include "atomflux/errors.hpp"
#include "atomflux/lorentzian.hpp"
#include "atomflux/spectra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace atomflux;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> sample(const FrequencyGrid& grid, const auto& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return v;
}

LorentzianFit fit_upper(const NoiseSpectra& sp, double omega_vib) {
  std::vector<double> w, v;
  for (std::size_t i = 0; i < sp.grid.size(); ++i) {
    if (sp.grid[i] > omega_vib) {
      w.push_back(sp.grid[i]);
      v.push_back(sp.n_sp[i]);
    }
  }
  return fit_lorentzian(w, v);
}

}  // namespace

TEST(Lorentzian, RecoversExactProfile) {
  const auto grid = FrequencyGrid::uniform(0.0, 10.0, 20001);
  const auto v = sample(grid, [](double w) { return lorentzian(w, 2.0, 4.3, 0.25); });
  const auto fit = fit_lorentzian(grid.omegas(), v);
  EXPECT_LT(rel(fit.fwhm, 0.25), 1e-3);
  EXPECT_NEAR(fit.peak_omega, 4.3, 1e-5);
  EXPECT_LT(fit.residual, 1e-6);
  EXPECT_LT(rel(fit.fit_width, 0.25), 1e-6);
}

TEST(Lorentzian, SpontaneousEmissionNormalized) {
  const auto t = TransitionSpec::normalized(2, 1e-3);
  const auto sp = compute_noise_spectra(make_spectral_grid(t, {}), t);
  const auto fit = fit_upper(sp, t.omega_vib);
  EXPECT_LT(rel(fit.fwhm, t.einstein_a()), 5e-3);
  EXPECT_NEAR(fit.peak_omega, resonance_frequencies(t).upper, 1e-5);
  EXPECT_LT(fit.residual, 0.01);
}

TEST(Lorentzian, SpontaneousEmissionHydrogen) {
  const auto t = TransitionSpec::si(AtomSpec::hydrogen(), 2, 4.69e8, 5.29177210903e-11);
  const auto sp = compute_noise_spectra(make_spectral_grid(t, {}), t);
  const auto fit = fit_upper(sp, t.omega_vib);
  EXPECT_LT(rel(fit.fwhm, 9.38e8), 0.01);
}

TEST(Lorentzian, MonotoneInputHasNoPeak) {
  const auto grid = FrequencyGrid::uniform(0.0, 1.0, 101);
  const auto v = sample(grid, [](double w) { return 1.0 + w; });
  EXPECT_THROW(fit_lorentzian(grid.omegas(), v), NoPeakError);
}

TEST(Lorentzian, FlatInputHasNoPeak) {
  const auto grid = FrequencyGrid::uniform(0.0, 1.0, 101);
  const std::vector<double> v(grid.size(), 3.0);
  EXPECT_THROW(fit_lorentzian(grid.omegas(), v), NoPeakError);
}

TEST(Lorentzian, TruncatedLineHasNoPeak) {
  // Maximum inside, but the profile never falls to half height on the right.
  const auto grid = FrequencyGrid::uniform(0.0, 1.0, 201);
  const auto v = sample(grid, [](double w) { return lorentzian(w, 1.0, 0.9, 1.0); });
  EXPECT_THROW(fit_lorentzian(grid.omegas(), v), NoPeakError);
}

TEST(Lorentzian, CoarseGridIsInsufficient) {
  const auto grid = FrequencyGrid::uniform(0.0, 10.0, 101);
  const auto v = sample(grid, [](double w) { return lorentzian(w, 1.0, 5.0, 0.05); });
  EXPECT_THROW(fit_lorentzian(grid.omegas(), v), InsufficientResolutionError);
}

TEST(Lorentzian, MismatchedSpans) {
  const std::vector<double> w{0.0, 1.0, 2.0};
  const std::vector<double> v{0.0, 1.0};
  EXPECT_THROW(fit_lorentzian(w, v), Error);
}

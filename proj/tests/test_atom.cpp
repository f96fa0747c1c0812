#include "atomflux/atom.hpp"
#include "atomflux/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace atomflux;

namespace {

// 50-digit evaluation of mu c^2 alpha^2 / hbar with the CODATA 2018 inputs.
constexpr double kOmega0H = 4.1318870400304117626e16;
constexpr double kOmegaVibH = 5.164858800038014703e15;
constexpr double kGroundEnergyH = -2.1786858117218115e-18;  // J
constexpr double kElectronVolt = 1.602176634e-19;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Exact value of the truncated sum  sum_{k=0}^{K} (k+1) y^k  with y = -(n-1).
double closed_partial(double x, int k_max) {
  const long double y = -x;
  const long double K = k_max;
  const long double num =
      1.0L - (K + 2.0L) * std::pow(y, K + 1.0L) + (K + 1.0L) * std::pow(y, K + 2.0L);
  return static_cast<double>(num / ((1.0L - y) * (1.0L - y)));
}

}  // namespace

TEST(Constants, FineStructureMatchesInverse) {
  EXPECT_LT(rel(codata2018.alpha, 1.0 / 137.035999084), 1e-9);
}

TEST(Constants, IsotopeLookup) {
  ASSERT_TRUE(find_isotope("He-4").has_value());
  EXPECT_EQ(find_isotope("He-4")->Z, 2);
  EXPECT_FALSE(find_isotope("Li-7").has_value());
}

TEST(Constants, ValidateRejectsNonPositive) {
  PhysicalConstants c;
  c.hbar = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PhysicalConstants{};
  c.alpha = std::nan("");
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Atom, RejectsBadInputs) {
  EXPECT_THROW(AtomSpec(0, 1.0e-27), ConfigError);
  EXPECT_THROW(AtomSpec(1, -1.0), ConfigError);
}

TEST(Atom, ReducedMassOfHydrogen) {
  const auto h = AtomSpec::hydrogen();
  const double me = codata2018.m_e, mp = codata2018.m_p;
  EXPECT_DOUBLE_EQ(h.reduced_mass(), me * mp / (me + mp));
  EXPECT_LT(h.reduced_mass(), me);
}

TEST(Ladder, HydrogenFundamentalFrozen) {
  const auto h = AtomSpec::hydrogen();
  EXPECT_LT(rel(fundamental_frequency(h), kOmega0H), 1e-12);
  EXPECT_LT(rel(vibrational_frequency(h, 2), kOmegaVibH), 1e-12);
}

TEST(Ladder, HydrogenWithinOnePercentOfQuoted) {
  const auto h = AtomSpec::hydrogen();
  EXPECT_LT(rel(fundamental_frequency(h), 4.15e16), 0.01);
  EXPECT_LT(rel(vibrational_frequency(h, 2), 5.19e15), 0.01);
}

TEST(Ladder, VibrationalIsOmega0OverNCubed) {
  const VibrationalLadder ladder(AtomSpec::hydrogen());
  EXPECT_EQ(ladder.omega_vib(1), ladder.omega0());
  EXPECT_EQ(ladder.omega_vib(2), ladder.omega0() / 8.0);
  EXPECT_EQ(ladder.omega_vib(3), ladder.omega0() / 27.0);
  EXPECT_THROW(ladder.omega_vib(0), ConfigError);
}

TEST(Ladder, ScalesAsZSquaredAndMu) {
  const auto h = AtomSpec::hydrogen();
  const AtomSpec he(2, 1.0e30);  // effectively infinite nuclear mass
  const double ratio = fundamental_frequency(he) / fundamental_frequency(h.with_reduced_mass(
                                                       he.reduced_mass()));
  EXPECT_NEAR(ratio, 4.0, 4.0 * 1e-14);
  const double w1 = fundamental_frequency(h);
  const double w2 = fundamental_frequency(h.with_reduced_mass(2.0 * h.reduced_mass()));
  EXPECT_NEAR(w2 / w1, 2.0, 1e-14);
}

TEST(SecondOrder, Values) {
  const double w0 = 3.0;
  EXPECT_DOUBLE_EQ(second_order_vibrational_frequency(w0, 1.0).omega, w0);
  EXPECT_DOUBLE_EQ(second_order_vibrational_frequency(w0, 2.0).omega, -2.0 * w0);
  EXPECT_DOUBLE_EQ(second_order_vibrational_frequency(w0, 2.0).beta2, 3.0 * w0);
  EXPECT_THROW(second_order_vibrational_frequency(w0, 0.5), ConfigError);
}

// omega_vib(n) = omega0 / n^3 has slope -3 omega0 at n = 1, which the
// second-order form reproduces to first order.
TEST(SecondOrder, TaylorConsistentNearGround) {
  const double w0 = 1.0;
  const double h = 1e-6;
  for (double n : {1.0, 1.1, 1.5, 2.0}) {
    const double approx = second_order_vibrational_frequency(w0, n + h).omega -
                          second_order_vibrational_frequency(w0, n).omega;
    EXPECT_NEAR(approx / h, -3.0 * w0, 1e-4) << n;
  }
  const double exact_slope = (w0 / std::pow(1.0 + h, 3) - w0 / std::pow(1.0 - h, 3)) / (2 * h);
  EXPECT_NEAR(exact_slope, -3.0 * w0, 1e-4);
  EXPECT_NEAR(second_order_vibrational_frequency(w0, 1.0 + h).omega, w0 / std::pow(1.0 + h, 3),
              1e-10);
}

TEST(Energy, GroundStateIsRydberg) {
  const auto h = AtomSpec::hydrogen();
  const double e1 = energy_closed_form(h, 1.0);
  EXPECT_LT(rel(e1, kGroundEnergyH), 1e-12);
  EXPECT_LT(rel(e1 / kElectronVolt, -13.6), 1e-3);
  EXPECT_DOUBLE_EQ(energy_closed_form(h, 2.0), e1 / 4.0);
  EXPECT_THROW(energy_closed_form(h, 0.0), ConfigError);
}

TEST(Series, CoefficientsAlternate) {
  const auto h = AtomSpec::hydrogen();
  const auto s = series_coefficients(h, 6);
  ASSERT_EQ(s.coefficients.size(), 7u);
  const double scale = 0.5 * rest_coupling_energy(h);
  for (int k = 0; k <= 6; ++k) {
    const double expected = (k % 2 == 0 ? -1.0 : 1.0) * (k + 1) * scale;
    EXPECT_DOUBLE_EQ(s.coefficients[k], expected) << k;
  }
}

TEST(Series, ExactAtGround) {
  const auto h = AtomSpec::hydrogen();
  const auto r = energy_series_partial_sum(h, 1.0, 200);
  EXPECT_EQ(r.value, energy_closed_form(h, 1.0));
  EXPECT_TRUE(r.converged);
}

TEST(Series, MatchesLongDoubleSumAndClosedForm) {
  const auto h = AtomSpec::hydrogen();
  const double scale = -0.5 * rest_coupling_energy(h);
  const double n = 1.5;
  long double brute = 0.0L;
  for (int k = 0; k <= 100; ++k) brute += (k + 1) * std::pow(-0.5L, k);
  const auto r = energy_series_partial_sum(h, n, 100);
  EXPECT_LT(rel(r.value, static_cast<double>(brute) * scale), 1e-12);
  EXPECT_LT(rel(r.value, scale / (n * n)), 1e-10);
  EXPECT_TRUE(r.converged);
}

TEST(Series, DivergenceFlaggedAtRadius) {
  const auto h = AtomSpec::hydrogen();
  const auto r = energy_series_partial_sum(h, 2.0, 200);
  EXPECT_FALSE(r.within_radius);
  EXPECT_FALSE(r.converged);
  // Partial sums 1 - 2 + 3 - ... oscillate without settling.
  const double a = energy_series_partial_sum(h, 2.0, 10).value;
  const double b = energy_series_partial_sum(h, 2.0, 11).value;
  EXPECT_LT(a * b, 0.0);
  EXPECT_FALSE(energy_series_partial_sum(h, 2.5, 50).within_radius);
}

TEST(Series, ConvergesInInteriorOfDisc) {
  const auto h = AtomSpec::hydrogen();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.12, 1.88);
  for (int i = 0; i < 200; ++i) {
    const double n = dist(rng);
    const auto r = energy_series_partial_sum(h, n, 200);
    EXPECT_LT(rel(r.value, energy_closed_form(h, n)), 1e-8) << n;
    EXPECT_TRUE(r.within_radius);
  }
}

TEST(Series, TailRatioBoundsTruncationError) {
  const auto h = AtomSpec::hydrogen();
  for (double n : {0.3, 0.5, 1.4, 1.7}) {
    for (int k_max : {5, 20, 60}) {
      const auto r = energy_series_partial_sum(h, n, k_max);
      const double err = rel(energy_closed_form(h, n), r.value);
      EXPECT_LE(err, r.tail_ratio * (1.0 + 1e-9) + 1e-14) << n << " " << k_max;
    }
  }
}

// Near the edge of the disc the truncation error is y^{K+1}-sized; the
// computed partial sum must still equal the exact truncated sum.
TEST(Series, EdgeMatchesExactTruncatedSum) {
  const auto h = AtomSpec::hydrogen();
  const double scale = -0.5 * rest_coupling_energy(h);
  for (double n : {0.05, 0.1, 1.9, 1.95}) {
    const auto r = energy_series_partial_sum(h, n, 200);
    EXPECT_LT(rel(r.value, scale * closed_partial(n - 1.0, 200)), 1e-11) << n;
    EXPECT_FALSE(r.converged) << n;
  }
}

#pragma once

#include "atomflux/langevin.hpp"
#include "atomflux/spectra.hpp"

#include <memory>
#include <span>
#include <vector>

namespace atomflux {

/// Two-sided density in angular frequency, stored on the non-negative bins
/// only (the spectrum of a real signal is even).
enum class Sidedness { two_sided, one_sided };

struct PsdEstimate {
  FrequencyGrid grid;  // omega_k = 2 pi k / (L dt), k = 0..L/2
  Sidedness sidedness = Sidedness::two_sided;
  std::vector<double> s_xx;
  std::vector<double> standard_error;  // per bin
  double dt = 0.0;
  double variance = 0.0;         // pooled sample variance of the input
  double variance_stderr = 0.0;  // across ensembles
  std::size_t segment_length = 0;
  std::size_t n_segments = 0;    // per ensemble
  std::size_t n_ensembles = 0;
};

/// Integral of the density over the whole angular-frequency axis.
double integrated_power(const PsdEstimate& psd);

/// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

/// Welch-averaged periodogram of one real series.
struct SeriesPeriodogram {
  std::vector<double> mean;         // averaged over segments
  std::vector<double> segment_var;  // variance across segments (for 1-ensemble stderr)
  double variance = 0.0;            // sample variance of the series
  std::size_t segments = 0;
};

/// Hann-windowed, overlapping-segment Welch estimator. The series mean is
/// removed before windowing; with S_k = dt |X_k|^2 / (2 pi sum w^2) the sum of
/// S_k over all L bins times 2 pi / (L dt) equals the window-weighted mean
/// square of the segments.
class WelchEstimator {
 public:
  /// Plans the FFT; construct on one thread, then share.
  WelchEstimator(double dt, const WelchSettings& settings);
  ~WelchEstimator();
  WelchEstimator(const WelchEstimator&) = delete;
  WelchEstimator& operator=(const WelchEstimator&) = delete;

  std::size_t segment_length() const noexcept { return length_; }
  std::size_t hop() const noexcept { return hop_; }
  std::size_t bins() const noexcept { return length_ / 2 + 1; }
  FrequencyGrid grid() const;

  /// Throws InsufficientDataError when the series is shorter than one segment.
  SeriesPeriodogram periodogram(std::span<const double> series) const;

  /// Fixed-order reduction of per-ensemble periodograms.
  PsdEstimate combine(std::span<const SeriesPeriodogram> parts) const;

 private:
  struct Plan;
  double dt_;
  std::size_t length_;
  std::size_t hop_;
  std::vector<double> window_;
  double window_power_;
  std::unique_ptr<Plan> plan_;
};

/// Welch PSD of the position component of each trajectory, averaged over
/// trajectories in index order.
PsdEstimate estimate_psd(std::span<const Trajectory> trajectories, const SimConfig& cfg);

/// Integrates and estimates ensemble by ensemble without keeping trajectories.
PsdEstimate simulate_psd(const SimConfig& cfg, unsigned threads = 1);

/// Analytic counterpart of s_xx: (gamma / pi mu^2) |D(omega)|^2.
double analytic_position_psd(double omega, const TransitionSpec& t);

/// The transition a SimConfig simulates (normalized units).
TransitionSpec transition_for(const SimConfig& cfg);

struct ValidationOptions {
  double band_lo = 0.2;  // in units of omega_vib
  double band_hi = 2.0;
  double tolerance = 0.05;  // RMS relative deviation
  std::size_t sub_bands = 9;
};

struct BandDeviation {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  std::size_t bins = 0;
  double rms_relative_deviation = 0.0;
};

struct ValidationReport {
  std::size_t bins = 0;
  double rms_relative_deviation = 0.0;
  double max_relative_deviation = 0.0;
  double peak_height_ratio = 0.0;  // max simulated / max analytic in band
  double tolerance = 0.0;
  std::vector<BandDeviation> bands;
  bool passed = false;
};

/// Compares s_xx(omega) with N_x(omega + omega_vib), which equals the analytic
/// transfer-function PSD. Throws InsufficientDataError if no bins fall in the band.
ValidationReport validate_against_analytic(const PsdEstimate& psd, const TransitionSpec& t,
                                           const ValidationOptions& options = {});

}  // namespace atomflux

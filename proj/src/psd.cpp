#include "atomflux/psd.hpp"

#include "atomflux/errors.hpp"
#include "atomflux/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

namespace atomflux {

namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

}  // namespace

struct WelchEstimator::Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan != nullptr) fftw_destroy_plan(plan);
  }
};

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

WelchEstimator::WelchEstimator(double dt, const WelchSettings& settings)
    : dt_(dt), length_(settings.segment_length), plan_(std::make_unique<Plan>()) {
  if (!(dt > 0.0)) throw ConfigError("sampling interval must be > 0");
  if (length_ < 2) throw ConfigError("Welch segment length must be >= 2");
  if (!(settings.overlap_fraction >= 0.0 && settings.overlap_fraction < 1.0)) {
    throw ConfigError("Welch overlap fraction must lie in [0, 1)");
  }
  const auto overlap = static_cast<std::size_t>(
      std::floor(static_cast<double>(length_) * settings.overlap_fraction));
  hop_ = std::max<std::size_t>(length_ - overlap, 1);
  window_ = hann_window(length_);
  window_power_ = 0.0;
  for (double w : window_) window_power_ += w * w;

  auto in = alloc_real(length_);
  auto out = alloc_complex(bins());
  plan_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(length_), in.get(), out.get(),
                                     FFTW_ESTIMATE);
  if (plan_->plan == nullptr) throw ConfigError("FFT planning failed");
}

WelchEstimator::~WelchEstimator() = default;

FrequencyGrid WelchEstimator::grid() const {
  std::vector<double> omegas(bins());
  const double step = 2.0 * std::numbers::pi / (static_cast<double>(length_) * dt_);
  for (std::size_t k = 0; k < omegas.size(); ++k) omegas[k] = step * static_cast<double>(k);
  return FrequencyGrid(std::move(omegas), UnitSystem::normalized);
}

SeriesPeriodogram WelchEstimator::periodogram(std::span<const double> series) const {
  const std::size_t n = series.size();
  if (n < length_) {
    throw InsufficientDataError("series of " + std::to_string(n) +
                                " samples is shorter than one segment of " +
                                std::to_string(length_));
  }
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double variance = 0.0;
  for (double x : series) variance += (x - mean) * (x - mean);
  variance /= static_cast<double>(n);

  const std::size_t nb = bins();
  std::vector<double> sum(nb, 0.0);
  std::vector<double> sum_sq(nb, 0.0);
  auto in = alloc_real(length_);
  auto out = alloc_complex(nb);
  const double scale = dt_ / (2.0 * std::numbers::pi * window_power_);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + length_ <= n; start += hop_) {
    for (std::size_t i = 0; i < length_; ++i) in[i] = (series[start + i] - mean) * window_[i];
    fftw_execute_dft_r2c(plan_->plan, in.get(), out.get());
    for (std::size_t k = 0; k < nb; ++k) {
      const double p = scale * (out[k][0] * out[k][0] + out[k][1] * out[k][1]);
      sum[k] += p;
      sum_sq[k] += p * p;
    }
    ++segments;
  }

  SeriesPeriodogram result;
  result.variance = variance;
  result.segments = segments;
  result.mean.resize(nb);
  result.segment_var.resize(nb);
  const auto m = static_cast<double>(segments);
  for (std::size_t k = 0; k < nb; ++k) {
    result.mean[k] = sum[k] / m;
    result.segment_var[k] =
        segments > 1 ? std::max(sum_sq[k] - m * result.mean[k] * result.mean[k], 0.0) / (m - 1.0)
                     : 0.0;
  }
  return result;
}

PsdEstimate WelchEstimator::combine(std::span<const SeriesPeriodogram> parts) const {
  if (parts.empty()) throw InsufficientDataError("no periodograms to combine");
  const std::size_t nb = bins();
  const auto e = static_cast<double>(parts.size());
  PsdEstimate psd;
  psd.grid = grid();
  psd.dt = dt_;
  psd.segment_length = length_;
  psd.n_segments = parts.front().segments;
  psd.n_ensembles = parts.size();
  psd.s_xx.assign(nb, 0.0);
  psd.standard_error.assign(nb, 0.0);
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < nb; ++k) psd.s_xx[k] += part.mean[k];
    psd.variance += part.variance;
  }
  for (double& s : psd.s_xx) s /= e;
  psd.variance /= e;

  if (parts.size() > 1) {
    double var_spread = 0.0;
    for (const auto& part : parts) {
      for (std::size_t k = 0; k < nb; ++k) {
        const double d = part.mean[k] - psd.s_xx[k];
        psd.standard_error[k] += d * d;
      }
      var_spread += (part.variance - psd.variance) * (part.variance - psd.variance);
    }
    for (double& se : psd.standard_error) se = std::sqrt(se / (e - 1.0) / e);
    psd.variance_stderr = std::sqrt(var_spread / (e - 1.0) / e);
  } else {
    const auto& only = parts.front();
    for (std::size_t k = 0; k < nb; ++k) {
      psd.standard_error[k] = std::sqrt(only.segment_var[k] / static_cast<double>(only.segments));
    }
  }
  return psd;
}

double integrated_power(const PsdEstimate& psd) {
  const std::size_t nb = psd.s_xx.size();
  if (nb < 2) return 0.0;
  const double step = psd.grid[1] - psd.grid[0];
  const bool has_nyquist = psd.segment_length % 2 == 0;
  double total = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const bool edge = k == 0 || (has_nyquist && k + 1 == nb);
    const double weight = psd.sidedness == Sidedness::one_sided || edge ? 1.0 : 2.0;
    total += weight * psd.s_xx[k];
  }
  return total * step;
}

PsdEstimate estimate_psd(std::span<const Trajectory> trajectories, const SimConfig& cfg) {
  if (trajectories.empty()) throw InsufficientDataError("no trajectories");
  const WelchEstimator estimator(cfg.dt, cfg.welch);
  std::vector<SeriesPeriodogram> parts;
  parts.reserve(trajectories.size());
  for (const auto& traj : trajectories) parts.push_back(estimator.periodogram(traj.x));
  return estimator.combine(parts);
}

PsdEstimate simulate_psd(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  const WelchEstimator estimator(cfg.dt, cfg.welch);
  std::vector<SeriesPeriodogram> parts(cfg.n_ensembles);
  parallel_for(cfg.n_ensembles, threads, [&](std::size_t e) {
    parts[e] = estimator.periodogram(integrate_langevin(cfg, e).x);
  });
  return estimator.combine(parts);
}

double analytic_position_psd(double omega, const TransitionSpec& t) {
  return t.gamma_sp / (std::numbers::pi * t.mu * t.mu) * std::norm(transfer_function(omega, t));
}

TransitionSpec transition_for(const SimConfig& cfg) {
  TransitionSpec t;
  t.n_upper = 2;
  t.omega_vib = cfg.omega_vib;
  t.omega0 = 8.0 * cfg.omega_vib;
  t.gamma_sp = cfg.gamma_sp;
  t.mu = cfg.mu;
  t.x0 = 1.0;
  t.units = UnitSystem::normalized;
  t.validate();
  return t;
}

ValidationReport validate_against_analytic(const PsdEstimate& psd, const TransitionSpec& t,
                                           const ValidationOptions& options) {
  const double lo = options.band_lo * t.omega_vib;
  const double hi = options.band_hi * t.omega_vib;
  if (!(hi > lo)) throw InsufficientDataError("validation band is empty");
  ValidationReport report;
  report.tolerance = options.tolerance;
  const std::size_t nsub = std::max<std::size_t>(options.sub_bands, 1);
  const double width = (hi - lo) / static_cast<double>(nsub);
  report.bands.resize(nsub);
  for (std::size_t b = 0; b < nsub; ++b) {
    report.bands[b].omega_lo = lo + width * static_cast<double>(b);
    report.bands[b].omega_hi = lo + width * static_cast<double>(b + 1);
  }

  double sum_sq = 0.0;
  double max_sim = 0.0;
  double max_analytic = 0.0;
  for (std::size_t k = 0; k < psd.s_xx.size(); ++k) {
    const double w = psd.grid[k];
    if (w < lo || w > hi) continue;
    // N_x is centred on omega_vib; shifting back recovers |D(w)|^2
    const double analytic = positional_noise_flux(w + t.omega_vib, t);
    const double rel = psd.s_xx[k] / analytic - 1.0;
    sum_sq += rel * rel;
    report.max_relative_deviation = std::max(report.max_relative_deviation, std::abs(rel));
    max_sim = std::max(max_sim, psd.s_xx[k]);
    max_analytic = std::max(max_analytic, analytic);
    ++report.bins;
    auto b = std::min(static_cast<std::size_t>((w - lo) / width), nsub - 1);
    report.bands[b].bins += 1;
    report.bands[b].rms_relative_deviation += rel * rel;
  }
  if (report.bins == 0) {
    throw InsufficientDataError("no spectral bins inside the validation band");
  }
  for (auto& band : report.bands) {
    if (band.bins > 0) {
      band.rms_relative_deviation =
          std::sqrt(band.rms_relative_deviation / static_cast<double>(band.bins));
    }
  }
  report.rms_relative_deviation = std::sqrt(sum_sq / static_cast<double>(report.bins));
  report.peak_height_ratio = max_sim / max_analytic;
  report.passed = report.rms_relative_deviation <= options.tolerance;
  return report;
}

}  // namespace atomflux

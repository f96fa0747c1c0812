#pragma once

#include <span>

namespace atomflux {

struct LorentzianFit {
  double peak_omega = 0.0;
  double peak_height = 0.0;
  double fwhm = 0.0;
  double residual = 0.0;  // ||v - model|| / ||v|| over [peak_omega +- 5 fwhm]
  // Best-fit a / ((omega - center)^2 + (width/2)^2) behind `residual`.
  double fit_amplitude = 0.0;
  double fit_center = 0.0;
  double fit_width = 0.0;
};

/// Measures the global maximum of `values` sampled at strictly increasing
/// `omegas`.
///
/// The peak location comes from a parabola through the log-values of the
/// maximum and its two neighbours; the FWHM from linear interpolation of the
/// two half-height crossings. Throws NoPeakError when the maximum sits on the
/// grid edge or a half-height crossing is missing, InsufficientResolutionError
/// when fewer than 5 samples lie above half height.
LorentzianFit fit_lorentzian(std::span<const double> omegas, std::span<const double> values);

/// a / ((omega - center)^2 + (width / 2)^2)
double lorentzian(double omega, double amplitude, double center, double width) noexcept;

}  // namespace atomflux

#include "atomflux/lorentzian.hpp"

#include "atomflux/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace atomflux {

double lorentzian(double omega, double amplitude, double center, double width) noexcept {
  const double d = omega - center;
  return amplitude / (d * d + 0.25 * width * width);
}

namespace {

struct Sample {
  double t;  // (omega - center0) / width0
  double v;  // value / peak height
};

double sum_squared_error(const std::vector<Sample>& s, const Eigen::Vector3d& p) {
  double sse = 0.0;
  for (const auto& [t, v] : s) {
    const double r = v - lorentzian(t, p[0], p[1], p[2]);
    sse += r * r;
  }
  return sse;
}

// Gauss-Newton with step halving on (amplitude, center, width) in scaled
// coordinates where the initial guess is (0.25, 0, 1).
Eigen::Vector3d refine(const std::vector<Sample>& s) {
  Eigen::Vector3d p(0.25, 0.0, 1.0);
  double sse = sum_squared_error(s, p);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (const auto& [t, v] : s) {
      const double d = t - p[1];
      const double q = d * d + 0.25 * p[2] * p[2];
      const double m = p[0] / q;
      const Eigen::Vector3d g(1.0 / q, 2.0 * p[0] * d / (q * q), -0.5 * p[0] * p[2] / (q * q));
      jtj += g * g.transpose();
      jtr += g * (v - m);
    }
    const Eigen::Vector3d step = jtj.ldlt().solve(jtr);
    if (!step.allFinite()) break;
    double scale = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      const Eigen::Vector3d trial = p + scale * step;
      const double trial_sse = sum_squared_error(s, trial);
      if (trial[2] > 0.0 && trial_sse <= sse) {
        p = trial;
        improved = trial_sse < sse;
        sse = trial_sse;
        break;
      }
      scale *= 0.5;
    }
    if (!improved || step.norm() * scale < 1e-15) break;
  }
  return p;
}

}  // namespace

LorentzianFit fit_lorentzian(std::span<const double> omegas, std::span<const double> values) {
  const std::size_t n = omegas.size();
  if (values.size() != n) throw NoPeakError("grid and values differ in length");
  if (n < 3) throw NoPeakError("fewer than 3 samples");
  const auto imax =
      static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  if (imax == 0 || imax + 1 == n) throw NoPeakError("maximum lies on the grid edge");
  if (!(values[imax] > 0.0) || !std::isfinite(values[imax])) {
    throw NoPeakError("maximum is not a finite positive value");
  }

  // parabola through log-values, abscissa relative to the centre sample
  LorentzianFit fit;
  {
    const double y0 = std::log(values[imax - 1]);
    const double y1 = std::log(values[imax]);
    const double y2 = std::log(values[imax + 1]);
    const double h0 = omegas[imax - 1] - omegas[imax];
    const double h2 = omegas[imax + 1] - omegas[imax];
    const double s0 = (y0 - y1) / h0;
    const double s2 = (y2 - y1) / h2;
    const double a = (s2 - s0) / (h2 - h0);
    const double b = s0 - a * h0;
    double shift = 0.0;
    double log_peak = y1;
    if (a < 0.0 && std::isfinite(a) && std::isfinite(b)) {
      shift = std::clamp(-b / (2.0 * a), h0, h2);
      log_peak = y1 + b * shift + a * shift * shift;
    }
    fit.peak_omega = omegas[imax] + shift;
    fit.peak_height = std::exp(log_peak);
  }

  const double half = 0.5 * fit.peak_height;
  auto crossing = [&](std::size_t below, std::size_t above) {
    const double f = (half - values[below]) / (values[above] - values[below]);
    return omegas[below] + f * (omegas[above] - omegas[below]);
  };
  std::size_t left = imax;
  while (left > 0 && values[left] >= half) --left;
  if (values[left] >= half) throw NoPeakError("no half-height crossing below the peak");
  std::size_t right = imax;
  while (right + 1 < n && values[right] >= half) ++right;
  if (values[right] >= half) throw NoPeakError("no half-height crossing above the peak");

  const std::size_t above_half = right - left - 1;
  if (above_half < 5) {
    throw InsufficientResolutionError("only " + std::to_string(above_half) +
                                      " samples above half height (need 5)");
  }
  const double lo = crossing(left, left + 1);
  const double hi = crossing(right, right - 1);
  fit.fwhm = hi - lo;

  std::vector<Sample> window;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(omegas[i] - fit.peak_omega) <= 5.0 * fit.fwhm) {
      window.push_back({(omegas[i] - fit.peak_omega) / fit.fwhm, values[i] / fit.peak_height});
    }
  }
  const Eigen::Vector3d p = refine(window);
  double num = 0.0;
  double den = 0.0;
  for (const auto& [t, v] : window) {
    const double r = v - lorentzian(t, p[0], p[1], p[2]);
    num += r * r;
    den += v * v;
  }
  fit.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  fit.fit_center = fit.peak_omega + p[1] * fit.fwhm;
  fit.fit_width = p[2] * fit.fwhm;
  fit.fit_amplitude = p[0] * fit.peak_height * fit.fwhm * fit.fwhm;
  return fit;
}

}  // namespace atomflux

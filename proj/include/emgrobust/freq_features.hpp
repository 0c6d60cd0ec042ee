#pragma once

#include <span>
#include <vector>

#include "emgrobust/signal.hpp"

namespace emg {

// Autoregressive model under the convention x_n = -sum_i a_i x_{n-i} + w_n,
// so a process x_n = phi * x_{n-1} + w_n has a_1 = -phi.
struct ArModel {
  std::vector<double> coefficients;  // a_1..a_p
  std::vector<double> reflection;    // Levinson-Durbin reflection coefficients k_1..k_p
  double noise_variance = 0.0;

  [[nodiscard]] int order() const { return static_cast<int>(coefficients.size()); }
};

// Yule-Walker estimate from the biased autocorrelation (no mean removal),
// solved with the Levinson-Durbin recursion. The biased estimator keeps the
// Toeplitz system positive definite, so every |k_i| < 1 and the model is
// stationary.
ArModel ar_coefficients(std::span<const double> x, int order);

struct MomentOptions {
  bool include_dc = true;
};

struct SpectralMoments {
  double mnf = 0.0;
  double mdf = 0.0;
  double mmnf = 0.0;
  double mmdf = 0.0;
};

// Power-weighted mean frequency.
double mnf(const PowerSpectrum& p, const MomentOptions& opts = {});

// Discrete median: frequency of the lowest bin whose cumulative power reaches
// half of the total.
double mdf(const PowerSpectrum& p, const MomentOptions& opts = {});

// Amplitude-weighted mean frequency (modified mean frequency).
double mmnf(const Spectrum& s, const MomentOptions& opts = {});

// Discrete median over the amplitude spectrum (modified median frequency).
double mmdf(const Spectrum& s, const MomentOptions& opts = {});

SpectralMoments spectral_moments(std::span<const double> x, double sampling_rate, const MomentOptions& opts = {});

// Shared by the four moment functions; exposed for testing the bin rule.
double weighted_mean_frequency(std::span<const double> freqs, std::span<const double> weights, const MomentOptions& opts);
double weighted_median_frequency(std::span<const double> freqs, std::span<const double> weights, const MomentOptions& opts);

}  // namespace emg

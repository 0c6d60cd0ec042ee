#include "emgrobust/freq_features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emg {

namespace {

std::size_t first_bin(std::span<const double> freqs, const MomentOptions& opts) {
  return (!opts.include_dc && !freqs.empty() && freqs[0] == 0.0) ? 1 : 0;
}

void check_weights(std::span<const double> freqs, std::span<const double> weights, const char* what) {
  if (freqs.size() != weights.size()) {
    throw std::invalid_argument(std::string(what) + ": frequency and weight arrays differ in length");
  }
}

}  // namespace

ArModel ar_coefficients(std::span<const double> x, int order) {
  if (order < 1) throw std::invalid_argument("ar_coefficients: order must be >= 1");
  const auto p = static_cast<std::size_t>(order);
  const std::size_t n = x.size();
  if (p >= n) {
    throw std::invalid_argument("ar_coefficients: order " + std::to_string(order) + " needs more than " +
                                std::to_string(order) + " samples, got " + std::to_string(n));
  }

  std::vector<double> r(p + 1, 0.0);
  for (std::size_t lag = 0; lag <= p; ++lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) acc += x[t] * x[t + lag];
    r[lag] = acc / static_cast<double>(n);
  }
  if (!(r[0] > 0.0)) throw std::invalid_argument("ar_coefficients: window is identically zero");

  // Levinson-Durbin on the predictor x_n ~ sum_i phi_i x_{n-i}; the returned
  // coefficients are a_i = -phi_i.
  std::vector<double> phi(p, 0.0);
  std::vector<double> prev(p, 0.0);
  ArModel model;
  model.reflection.resize(p);
  double err = r[0];
  for (std::size_t m = 1; m <= p; ++m) {
    double acc = r[m];
    for (std::size_t i = 1; i < m; ++i) acc -= prev[i - 1] * r[m - i];
    const double k = acc / err;
    phi[m - 1] = k;
    for (std::size_t i = 1; i < m; ++i) phi[i - 1] = prev[i - 1] - k * prev[m - i - 1];
    err *= (1.0 - k * k);
    model.reflection[m - 1] = k;
    prev = phi;
  }

  model.coefficients.resize(p);
  for (std::size_t i = 0; i < p; ++i) model.coefficients[i] = -phi[i];
  model.noise_variance = err > 0.0 ? err : 0.0;
  return model;
}

double weighted_mean_frequency(std::span<const double> freqs, std::span<const double> weights, const MomentOptions& opts) {
  check_weights(freqs, weights, "mean frequency");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = first_bin(freqs, opts); j < freqs.size(); ++j) {
    num += freqs[j] * weights[j];
    den += weights[j];
  }
  if (!(den > 0.0)) throw std::domain_error("mean frequency undefined for an all-zero spectrum");
  return num / den;
}

double weighted_median_frequency(std::span<const double> freqs, std::span<const double> weights, const MomentOptions& opts) {
  check_weights(freqs, weights, "median frequency");
  const std::size_t begin = first_bin(freqs, opts);
  double total = 0.0;
  for (std::size_t j = begin; j < weights.size(); ++j) total += weights[j];
  if (!(total > 0.0)) throw std::domain_error("median frequency undefined for an all-zero spectrum");
  const double half = 0.5 * total;
  double cum = 0.0;
  for (std::size_t j = begin; j < weights.size(); ++j) {
    cum += weights[j];
    if (cum >= half) return freqs[j];
  }
  // Only reachable through rounding in the running sum.
  return freqs.back();
}

double mnf(const PowerSpectrum& p, const MomentOptions& opts) { return weighted_mean_frequency(p.freqs, p.powers, opts); }
double mdf(const PowerSpectrum& p, const MomentOptions& opts) { return weighted_median_frequency(p.freqs, p.powers, opts); }
double mmnf(const Spectrum& s, const MomentOptions& opts) { return weighted_mean_frequency(s.freqs, s.amplitudes, opts); }
double mmdf(const Spectrum& s, const MomentOptions& opts) { return weighted_median_frequency(s.freqs, s.amplitudes, opts); }

SpectralMoments spectral_moments(std::span<const double> x, double sampling_rate, const MomentOptions& opts) {
  const auto spec = amplitude_spectrum(x, sampling_rate);
  const auto pow = power_spectrum(spec);
  return SpectralMoments{mnf(pow, opts), mdf(pow, opts), mmnf(spec, opts), mmdf(spec, opts)};
}

}  // namespace emg

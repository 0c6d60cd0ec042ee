#include "emgrobust/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace emg::fir {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> kaiser_lowpass(double cutoff_hz, double transition_hz, double attenuation_db, double sampling_rate) {
  if (!(sampling_rate > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < sampling_rate / 2.0) || !(transition_hz > 0.0)) {
    throw std::invalid_argument("kaiser_lowpass: invalid band parameters");
  }
  // Kaiser's design formulas.
  const double a = attenuation_db;
  double beta = 0.0;
  if (a > 50.0) {
    beta = 0.1102 * (a - 8.7);
  } else if (a >= 21.0) {
    beta = 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  }
  const double dw = 2.0 * std::numbers::pi * transition_hz / sampling_rate;
  auto len = static_cast<std::size_t>(std::ceil((a - 8.0) / (2.285 * dw))) + 1;
  if (len % 2 == 0) ++len;

  const double fc = cutoff_hz / sampling_rate;
  const double mid = static_cast<double>(len - 1) / 2.0;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(len);
  double sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) - mid;
    const double r = t / mid;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[i] = 2.0 * fc * sinc(2.0 * fc * t) * w;
    sum += h[i];
  }
  for (auto& v : h) v /= sum;
  return h;
}

std::vector<double> blackman_bandpass(double low_hz, double high_hz, std::size_t taps, double sampling_rate) {
  if (taps < 3 || taps % 2 == 0) throw std::invalid_argument("blackman_bandpass: taps must be odd and >= 3");
  if (!(low_hz >= 0.0) || !(high_hz > low_hz) || !(high_hz <= sampling_rate / 2.0)) {
    throw std::invalid_argument("blackman_bandpass: band must satisfy 0 <= low < high <= sampling_rate / 2");
  }
  const double f1 = low_hz / sampling_rate;
  const double f2 = high_hz / sampling_rate;
  const double mid = static_cast<double>(taps - 1) / 2.0;
  std::vector<double> h(taps);
  for (std::size_t i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i) - mid;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(taps - 1);
    const double w = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
    h[i] = (2.0 * f2 * sinc(2.0 * f2 * t) - 2.0 * f1 * sinc(2.0 * f1 * t)) * w;
  }
  // Normalize the gain at the band center to one.
  const double fc = 0.5 * (f1 + f2);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i) - mid;
    re += h[i] * std::cos(2.0 * std::numbers::pi * fc * t);
    im += h[i] * std::sin(2.0 * std::numbers::pi * fc * t);
  }
  const double gain = std::hypot(re, im);
  for (auto& v : h) v /= gain;
  return h;
}

std::vector<double> filter_centered(std::span<const double> x, std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) throw std::invalid_argument("filter_centered: kernel length must be odd");
  const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(taps.size()); ++k) {
      const std::ptrdiff_t src = i + half - k;
      if (src >= 0 && src < n) acc += taps[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(src)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::vector<double> filter_valid(std::span<const double> x, std::span<const double> taps) {
  if (taps.empty() || x.size() < taps.size()) throw std::invalid_argument("filter_valid: input shorter than kernel");
  const std::size_t out_len = x.size() - taps.size() + 1;
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    double acc = 0.0;
    const std::size_t last = i + taps.size() - 1;
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * x[last - k];
    out[i] = acc;
  }
  return out;
}

}  // namespace emg::fir

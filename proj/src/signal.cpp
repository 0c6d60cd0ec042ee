#include "emgrobust/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emg {

namespace {

std::size_t duration_to_samples(double ms, double sampling_rate, const char* what) {
  if (!(ms > 0.0) || !std::isfinite(ms)) {
    throw std::invalid_argument(std::string(what) + " must be a positive duration");
  }
  if (!(sampling_rate > 0.0)) {
    throw std::invalid_argument("sampling rate must be positive");
  }
  const double exact = ms * sampling_rate / 1000.0;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-9 * std::max(1.0, exact)) {
    throw std::invalid_argument(std::string(what) + " of " + std::to_string(ms) + " ms is not an integer number of samples at " +
                                std::to_string(sampling_rate) + " Hz");
  }
  return static_cast<std::size_t>(rounded);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // Twiddles from std::polar per element keep rounding error at O(eps)
        // instead of accumulating along the butterfly.
        const auto w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

// Bins 0..m-1 of the DFT of a real sequence.
std::vector<std::complex<double>> dft_bins(std::span<const double> x, std::size_t m) {
  const std::size_t n = x.size();
  if (is_power_of_two(n)) {
    std::vector<std::complex<double>> a(x.begin(), x.end());
    fft_radix2(a);
    a.resize(m);
    return a;
  }
  std::vector<std::complex<double>> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      // (k*t) mod n keeps the phase argument small for long windows.
      const auto idx = static_cast<double>((k * t) % n);
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * idx / static_cast<double>(n));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

Signal::Signal(std::vector<double> samples, double sampling_rate)
    : samples_(std::move(samples)), sampling_rate_(sampling_rate) {
  if (!(sampling_rate_ > 0.0) || !std::isfinite(sampling_rate_)) {
    throw std::invalid_argument("Signal: sampling rate must be positive and finite");
  }
  if (samples_.empty()) {
    throw std::invalid_argument("Signal: at least one sample is required");
  }
}

double Signal::duration_ms() const { return 1000.0 * static_cast<double>(samples_.size()) / sampling_rate_; }

std::size_t SegmentationConfig::window_samples(double sampling_rate) const {
  const auto n = duration_to_samples(window_ms, sampling_rate, "window length");
  if (n < 2) throw std::invalid_argument("window must span at least 2 samples");
  return n;
}

std::size_t SegmentationConfig::slide_samples(double sampling_rate) const {
  const auto n = duration_to_samples(slide_ms, sampling_rate, "window slide");
  if (slide_ms > window_ms) throw std::invalid_argument("window slide must not exceed window length");
  return n;
}

double Window::start_ms() const { return 1000.0 * static_cast<double>(start) / sampling_rate; }

std::size_t window_count(std::size_t signal_length, std::size_t window, std::size_t slide) {
  if (window == 0 || slide == 0 || signal_length < window) return 0;
  return (signal_length - window) / slide + 1;
}

std::vector<Window> segment(const Signal& signal, const SegmentationConfig& cfg) {
  const double rate = signal.sampling_rate();
  const std::size_t len = cfg.window_samples(rate);
  const std::size_t step = cfg.slide_samples(rate);
  const std::size_t count = window_count(signal.size(), len, step);
  if (count == 0) {
    throw std::invalid_argument("segment: signal has " + std::to_string(signal.size()) + " samples but one window requires " +
                                std::to_string(len));
  }
  std::vector<Window> out;
  out.reserve(count);
  const auto& x = signal.samples();
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start = k * step;
    out.push_back(Window{start, std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(start),
                                                    x.begin() + static_cast<std::ptrdiff_t>(start + len)),
                         rate});
  }
  return out;
}

Spectrum amplitude_spectrum(std::span<const double> samples, double sampling_rate) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("amplitude_spectrum: window needs at least 2 samples");
  if (!(sampling_rate > 0.0)) throw std::invalid_argument("amplitude_spectrum: sampling rate must be positive");

  const std::size_t m = n / 2 + 1;
  const auto bins = dft_bins(samples, m);
  const double nd = static_cast<double>(n);
  const double edge_scale = 1.0 / std::sqrt(nd);
  const double interior_scale = std::sqrt(2.0 / nd);
  const bool has_nyquist = n % 2 == 0;

  Spectrum s;
  s.freqs.resize(m);
  s.amplitudes.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    s.freqs[j] = static_cast<double>(j) * sampling_rate / nd;
    const bool edge = j == 0 || (has_nyquist && j == m - 1);
    s.amplitudes[j] = std::abs(bins[j]) * (edge ? edge_scale : interior_scale);
  }
  return s;
}

PowerSpectrum power_spectrum(const Spectrum& spectrum) {
  PowerSpectrum p;
  p.freqs = spectrum.freqs;
  p.powers.resize(spectrum.amplitudes.size());
  for (std::size_t j = 0; j < spectrum.amplitudes.size(); ++j) {
    p.powers[j] = spectrum.amplitudes[j] * spectrum.amplitudes[j];
  }
  return p;
}

}  // namespace emg

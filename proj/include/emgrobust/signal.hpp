#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emg {

// One channel of sampled sEMG. Amplitudes are in the same units as every
// amplitude threshold used elsewhere (mV by convention).
class Signal {
 public:
  Signal() = default;
  Signal(std::vector<double> samples, double sampling_rate);

  [[nodiscard]] const std::vector<double>& samples() const { return samples_; }
  [[nodiscard]] std::span<const double> view() const { return samples_; }
  [[nodiscard]] double sampling_rate() const { return sampling_rate_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] double duration_ms() const;

 private:
  std::vector<double> samples_;
  double sampling_rate_ = 0.0;
};

struct SegmentationConfig {
  double window_ms = 256.0;
  double slide_ms = 64.0;

  // Both throw std::invalid_argument when the duration does not map onto an
  // integer sample count at `sampling_rate`.
  [[nodiscard]] std::size_t window_samples(double sampling_rate) const;
  [[nodiscard]] std::size_t slide_samples(double sampling_rate) const;
};

struct Window {
  std::size_t start = 0;  // sample index of the first sample in the parent signal
  std::vector<double> samples;
  double sampling_rate = 0.0;

  [[nodiscard]] std::span<const double> view() const { return samples; }
  [[nodiscard]] double start_ms() const;
};

// Sliding segmentation; the trailing partial window is discarded.
std::vector<Window> segment(const Signal& signal, const SegmentationConfig& cfg);

// Number of windows segment() would produce, or 0 if the signal is too short.
std::size_t window_count(std::size_t signal_length, std::size_t window, std::size_t slide);

// One-sided amplitude spectrum over bins j = 0..floor(N/2). Normalized so that
// sum(A_j^2) equals sum(x_n^2): interior bins carry the folded negative
// frequency half, DC and (for even N) Nyquist do not.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> amplitudes;

  [[nodiscard]] std::size_t bins() const { return freqs.size(); }
};

struct PowerSpectrum {
  std::vector<double> freqs;
  std::vector<double> powers;

  [[nodiscard]] std::size_t bins() const { return freqs.size(); }
};

Spectrum amplitude_spectrum(std::span<const double> samples, double sampling_rate);
inline Spectrum amplitude_spectrum(const Window& w) { return amplitude_spectrum(w.view(), w.sampling_rate); }

PowerSpectrum power_spectrum(const Spectrum& spectrum);

}  // namespace emg

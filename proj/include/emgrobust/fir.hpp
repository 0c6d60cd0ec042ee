#pragma once

#include <span>
#include <vector>

namespace emg::fir {

// Kaiser-window lowpass. `cutoff_hz` is the -6 dB point, `transition_hz` the
// full transition width, `attenuation_db` the stopband target. Odd length.
std::vector<double> kaiser_lowpass(double cutoff_hz, double transition_hz, double attenuation_db, double sampling_rate);

// Blackman-windowed sinc bandpass with unit passband gain. `taps` must be odd.
std::vector<double> blackman_bandpass(double low_hz, double high_hz, std::size_t taps, double sampling_rate);

// Zero-phase (centered) convolution with an odd-length kernel; samples beyond
// the ends are taken as zero. Output length equals input length.
std::vector<double> filter_centered(std::span<const double> x, std::span<const double> taps);

// Causal full convolution trimmed to the last x.size() - taps.size() + 1 outputs,
// i.e. only outputs that saw a full kernel of input.
std::vector<double> filter_valid(std::span<const double> x, std::span<const double> taps);

}  // namespace emg::fir

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emgrobust/dataset.hpp"

namespace emg {

struct SynthClass {
  std::string name;
  double band_low_hz = 20.0;
  double band_high_hz = 450.0;
  double amplitude = 50.0;  // RMS of the generated signal at channel gain 1
  std::string group = "strong";
};

struct SynthConfig {
  std::vector<SynthClass> classes;
  int channels = 2;
  // gains[class][channel]; empty selects the default pattern where each class
  // has a strong channel (gain 1) and weak ones (gain 0.5), alternating.
  std::vector<std::vector<double>> channel_gains;
  double sampling_rate = 1000.0;
  int trials_per_class = 6;
  double trial_duration_ms = 2048.0;
  std::size_t filter_taps = 301;
  // Length of the slow amplitude envelope that holds local RMS at the class
  // scale; 0 leaves plain filtered noise scaled to the expected RMS.
  double envelope_ms = 256.0;
  std::uint64_t seed = 0;
  std::string subject = "synthetic";

  // Throws std::invalid_argument on degenerate bands, non-positive amplitudes
  // or inconsistent gain tables.
  void validate() const;
  [[nodiscard]] double gain(std::size_t cls, std::size_t channel) const;
};

// `classes` classes with disjoint consecutive sub-bands of 20-450 Hz and
// increasing amplitudes; the upper half of the amplitude range is tagged "strong".
SynthConfig default_synth_config(int classes, int channels, std::uint64_t seed);

// Bandpass-filtered Gaussian noise per (class, trial, channel), amplitude
// modulated so its local RMS stays at amplitude x gain. Trial files are named trial_NNN.csv.
Dataset synthesize_emg(const SynthConfig& cfg);

}  // namespace emg

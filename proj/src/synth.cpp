#include "emgrobust/synth.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "emgrobust/fir.hpp"
#include "emgrobust/noise.hpp"
#include "emgrobust/text.hpp"

namespace emg {

namespace {

constexpr std::array<const char*, 7> kMotionNames = {"hand_open",   "hand_close",        "wrist_extension", "wrist_flexion",
                                                     "forearm_pronation", "forearm_supination", "rest"};

// Divides x by its Hann-weighted local RMS over `len` samples, giving a unit
// power envelope that varies slowly along the trial.
std::vector<double> flatten_envelope(const std::vector<double>& x, std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(len));
  const auto half = static_cast<std::ptrdiff_t>(len / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    double acc = 0.0;
    double wsum = 0.0;
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(len); ++k) {
      const auto i = t - half + k;
      if (i < 0 || i >= n) continue;
      acc += w[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      wsum += w[static_cast<std::size_t>(k)];
    }
    const double env = std::sqrt(acc / wsum);
    out[static_cast<std::size_t>(t)] = env > 0.0 ? x[static_cast<std::size_t>(t)] / env : 0.0;
  }
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (classes.empty()) throw std::invalid_argument("synth: at least one class is required");
  if (channels < 1) throw std::invalid_argument("synth: channel count must be >= 1");
  if (trials_per_class < 1) throw std::invalid_argument("synth: trials per class must be >= 1");
  if (!(sampling_rate > 0.0)) throw std::invalid_argument("synth: sampling rate must be positive");
  if (filter_taps < 3 || filter_taps % 2 == 0) throw std::invalid_argument("synth: filter taps must be odd and >= 3");
  if (!(envelope_ms >= 0.0)) throw std::invalid_argument("synth: envelope length must be >= 0");
  SegmentationConfig probe{trial_duration_ms, trial_duration_ms};
  (void)probe.window_samples(sampling_rate);
  const double nyquist = sampling_rate / 2.0;
  for (const auto& c : classes) {
    if (!(c.band_low_hz > 0.0) || !(c.band_high_hz < nyquist)) {
      throw std::invalid_argument("synth: band of class '" + c.name + "' must lie inside (0, " + format_number(nyquist) + ") Hz");
    }
    if (!(c.band_high_hz > c.band_low_hz)) {
      throw std::invalid_argument("synth: band of class '" + c.name + "' has zero or negative width");
    }
    if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude)) {
      throw std::invalid_argument("synth: amplitude of class '" + c.name + "' must be positive");
    }
  }
  if (!channel_gains.empty()) {
    if (channel_gains.size() != classes.size()) throw std::invalid_argument("synth: gain table needs one row per class");
    for (const auto& row : channel_gains) {
      if (row.size() != static_cast<std::size_t>(channels)) throw std::invalid_argument("synth: gain table needs one column per channel");
      for (double g : row) {
        if (!(g > 0.0)) throw std::invalid_argument("synth: channel gains must be positive");
      }
    }
  }
}

double SynthConfig::gain(std::size_t cls, std::size_t channel) const {
  if (!channel_gains.empty()) return channel_gains.at(cls).at(channel);
  return (cls + channel) % 2 == 0 ? 1.0 : 0.5;
}

SynthConfig default_synth_config(int classes, int channels, std::uint64_t seed) {
  if (classes < 1) throw std::invalid_argument("synth: class count must be >= 1");
  SynthConfig cfg;
  cfg.channels = channels;
  cfg.seed = seed;
  const double lo = 20.0;
  const double hi = 450.0;
  const double step = (hi - lo) / classes;
  for (int k = 0; k < classes; ++k) {
    SynthClass c;
    c.name = static_cast<std::size_t>(classes) <= kMotionNames.size() ? kMotionNames[static_cast<std::size_t>(k)]
                                                                      : "class_" + std::to_string(k);
    c.band_low_hz = lo + step * k;
    c.band_high_hz = lo + step * (k + 1);
    c.amplitude = 40.0 + 20.0 * k;
    c.group = 2 * k >= classes ? "strong" : "weak";
    cfg.classes.push_back(c);
  }
  return cfg;
}

Dataset synthesize_emg(const SynthConfig& cfg) {
  cfg.validate();
  Dataset ds;
  ds.sampling_rate = cfg.sampling_rate;
  for (const auto& c : cfg.classes) ds.classes.push_back(c.name);

  const std::size_t n = SegmentationConfig{cfg.trial_duration_ms, cfg.trial_duration_ms}.window_samples(cfg.sampling_rate);
  const auto envelope_len = static_cast<std::size_t>(std::lround(cfg.envelope_ms * cfg.sampling_rate / 1000.0));
  std::vector<std::string> channel_names;
  for (int c = 0; c < cfg.channels; ++c) channel_names.push_back("ch" + std::to_string(c + 1));

  std::size_t trial_no = 0;
  for (int t = 0; t < cfg.trials_per_class; ++t) {
    for (std::size_t k = 0; k < cfg.classes.size(); ++k) {
      const auto& cls = cfg.classes[k];
      const auto taps = fir::blackman_bandpass(cls.band_low_hz, cls.band_high_hz, cfg.filter_taps, cfg.sampling_rate);
      double energy = 0.0;
      for (double h : taps) energy += h * h;

      Trial trial;
      char name[32];
      std::snprintf(name, sizeof name, "trial_%03zu.csv", trial_no++);
      trial.path = name;
      trial.label = cls.name;
      trial.subject = cfg.subject;
      trial.group = cls.group;
      trial.channel_names = channel_names;
      for (int ch = 0; ch < cfg.channels; ++ch) {
        const auto seed = derive_seed(cfg.seed, {k, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(ch)});
        const auto white = generate_wgn(n + taps.size() - 1, seed);
        auto x = fir::filter_valid(white, taps);
        double scale = cls.amplitude * cfg.gain(k, static_cast<std::size_t>(ch));
        if (envelope_len >= 2) {
          x = flatten_envelope(x, envelope_len);
        } else {
          scale /= std::sqrt(energy);
        }
        for (auto& v : x) v *= scale;
        trial.channels.emplace_back(std::move(x), cfg.sampling_rate);
      }
      ds.trials.push_back(std::move(trial));
    }
  }
  return ds;
}

}  // namespace emg

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emgrobust/signal.hpp"

namespace emg {

// Ingestion failures, one type per cause so callers and tests can tell them apart.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingFileError : public DataError {
 public:
  using DataError::DataError;
};
class RateMismatchError : public DataError {
 public:
  using DataError::DataError;
};
class UnknownLabelError : public DataError {
 public:
  using DataError::DataError;
};
class ParseError : public DataError {
 public:
  using DataError::DataError;
};
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

// One labeled multi-channel recording. Channels share sampling rate and length.
struct Trial {
  std::string path;  // CSV path relative to the manifest directory
  std::string label;
  std::string subject;
  std::string group;
  std::vector<std::string> channel_names;
  std::vector<Signal> channels;

  [[nodiscard]] std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
  [[nodiscard]] double duration_ms() const { return channels.empty() ? 0.0 : channels.front().duration_ms(); }
};

struct Dataset {
  std::vector<std::string> classes;
  double sampling_rate = 0.0;
  std::vector<Trial> trials;

  // Index of `label` in `classes`; throws UnknownLabelError.
  [[nodiscard]] int class_index(const std::string& label) const;
  [[nodiscard]] std::size_t channel_count() const;

  // Throws DataError when trials disagree on rate, channel layout or labels.
  void validate() const;
};

// Manifest JSON:
//   {"classes": [..], "sampling_rate_hz": r,
//    "trials": [{"path", "label", "subject", "group", "channels": [..],
//                "sampling_rate_hz"?: r}]}
// A per-trial sampling_rate_hz, when present, must equal the dataset rate.
Dataset load_dataset(const std::filesystem::path& manifest);

// Writes manifest.json plus one CSV per trial into `dir` (created if needed).
// Samples are rendered in shortest round-trip form, so loading reproduces them bit-exactly.
std::filesystem::path save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

// Trial CSV: first row channel names, then one row per sample.
struct TrialTable {
  std::vector<std::string> channel_names;
  std::vector<std::vector<double>> columns;
};
TrialTable read_trial_csv(const std::filesystem::path& path);
void write_trial_csv(const std::filesystem::path& path, const std::vector<std::string>& channel_names,
                     const std::vector<Signal>& channels);

// Anti-aliased downsampling by an integer factor: Kaiser lowpass with its -6 dB
// point at 0.8 x the new Nyquist frequency and >= 60 dB stopband, applied with
// zero phase, then every factor-th sample kept.
Signal decimate(const Signal& signal, int factor);
Dataset decimate(const Dataset& dataset, int factor);

}  // namespace emg

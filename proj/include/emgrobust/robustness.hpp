#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emgrobust/dataset.hpp"
#include "emgrobust/features.hpp"
#include "emgrobust/signal.hpp"

namespace emg {

// |(clean - noisy) / clean| x 100. Throws std::domain_error when clean == 0.
double percentage_error(double clean_value, double noisy_value);

// A labeled set of (motion label, channel name) recordings, e.g. the strong
// or weak signals of an experiment.
struct SignalGroup {
  std::string name;
  std::vector<std::pair<std::string, std::string>> members;
};

struct RobustnessConfig {
  std::vector<double> snr_grid{20.0, 15.0, 10.0, 5.0, 3.0, 0.0};
  int repetitions = 10;
  std::uint64_t seed = 0;
  SegmentationConfig segmentation{};
  // Empty: every channel of a trial belongs to the trial's manifest group.
  std::vector<SignalGroup> signal_groups;
  // Skip injection; every noisy value equals its clean value.
  bool dry_run = false;
  // Average PE over all vector elements instead of the configured element.
  bool full_vector = false;

  void validate() const;
};

// n counts the PE values averaged; excluded counts windows x repetitions whose
// PE was undefined (clean value 0) or whose extraction failed. n + excluded
// equals repetitions x windows contributing to the cell.
struct RobustnessCell {
  std::string feature;
  std::string parameters;
  std::string group;
  std::string motion;
  double snr_db = 0.0;
  double mean_pe = 0.0;
  double std_pe = 0.0;
  std::size_t n = 0;
  std::size_t excluded = 0;
};

struct RobustnessGrid {
  std::vector<RobustnessCell> cells;

  // n-weighted mean PE over every cell of `feature` (name) at `snr_db`,
  // optionally restricted to one parameter string and/or group.
  [[nodiscard]] double pooled_mean(std::string_view feature, double snr_db, std::string_view parameters = {},
                                   std::string_view group = {}) const;
  [[nodiscard]] std::size_t pooled_count(std::string_view feature, double snr_db) const;
};

// For every (trial channel window, feature, snr, repetition): extract the clean
// value, inject WGN at the SNR, extract again, record PE. Noise for a window
// is drawn from derive_seed(cfg.seed, {trial, channel, window, snr index}) and
// the repetition index, so results do not depend on evaluation order. Unset
// HEMG ranges are resolved from the largest clean amplitude in the dataset.
RobustnessGrid run_grid(const Dataset& dataset, std::span<const FeatureSpec> features, const RobustnessConfig& cfg);

// One run_grid per parameter value; the parameters column tells the slices apart.
struct ParameterSweep {
  FeatureSpec base;
  std::string key;
  std::vector<double> values;
};

// "wamp:threshold=10..50:10" (inclusive range with step) or "hemg:bins=3/5/7".
ParameterSweep parse_sweep(std::string_view text);

RobustnessGrid sweep_parameters(const Dataset& dataset, const ParameterSweep& sweep, const RobustnessConfig& cfg);

// Columns: feature,parameters,group,motion,snr_db,mean_pe,std_pe,n,excluded
void write_grid_csv(std::ostream& out, const RobustnessGrid& grid);
nlohmann::json grid_to_json(const RobustnessGrid& grid);

nlohmann::json config_to_json(const RobustnessConfig& cfg);

// RMS, ZC(10), WAMP(10), SSC(30), HEMG(3 bins, 2nd bin), AR(1), MNF, MDF, MMNF, MMDF.
std::vector<FeatureSpec> default_robustness_panel();

}  // namespace emg

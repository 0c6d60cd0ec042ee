#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emg {

struct Dataset;

enum class FeatureKind { iemg, mav, mmav1, mmav2, mavslp, ssi, var, rms, wl, zc, ssc, wamp, hemg, ar, mnf, mdf, mmnf, mmdf };

// A configured feature extractor. Only the fields relevant to `kind` matter.
//
// Text form: name[:key=value[:key=value...]], e.g. "zc:threshold=20",
// "hemg:bins=5:element=2", "ar:order=2". Keys: threshold (zc, ssc, wamp),
// bins and range (hemg), order (ar), segments (mavslp), dc=0|1 (moments), and
// element, the 1-based vector element used when one scalar is needed.
struct FeatureSpec {
  FeatureKind kind = FeatureKind::rms;
  double threshold = 0.0;
  int bins = 3;
  std::optional<double> range;  // hemg amplitude limit; resolved from data when unset
  int order = 1;
  int segments = 4;
  std::size_t element = 1;
  bool include_dc = true;

  [[nodiscard]] std::string name() const;
  // Canonical "key=value;key=value" string of the parameters that affect the value.
  [[nodiscard]] std::string parameters() const;
  [[nodiscard]] std::string label() const;
  [[nodiscard]] bool is_vector() const;
  // Number of values produced for a window of `window_len` samples.
  [[nodiscard]] std::size_t width() const;

  bool operator==(const FeatureSpec&) const = default;
};

// Spec with the defaults used across the robustness and recognition runs:
// ZC and WAMP at 10, SSC at 30, HEMG with 3 bins scalarized at its 2nd bin,
// AR order 1 scalarized at a_1.
FeatureSpec make_feature(FeatureKind kind);

const std::vector<std::string>& feature_names();

// Throws std::invalid_argument naming the valid features / keys.
FeatureSpec parse_feature(std::string_view text);
std::vector<FeatureSpec> parse_feature_list(std::string_view comma_separated);

// Applies one key=value setting with validation.
void set_parameter(FeatureSpec& spec, std::string_view key, double value);

// Full feature vector for one window.
std::vector<double> extract(const FeatureSpec& spec, std::span<const double> x, double sampling_rate);

// The single value used for percentage-error bookkeeping: the whole scalar,
// or element `spec.element` of a vector feature.
double extract_scalar(const FeatureSpec& spec, std::span<const double> x, double sampling_rate);

// Fills unset HEMG ranges with `max_abs` (throws if max_abs <= 0).
void resolve_histogram_range(std::vector<FeatureSpec>& specs, double max_abs);

// Largest |sample| over the listed trials (all trials when `trials` is empty).
double max_abs_amplitude(const Dataset& ds, std::span<const std::size_t> trials = {});

}  // namespace emg

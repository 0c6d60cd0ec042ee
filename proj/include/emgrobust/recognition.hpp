#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "emgrobust/dataset.hpp"
#include "emgrobust/features.hpp"
#include "emgrobust/signal.hpp"

namespace emg {

// Feature rows (one per window) with labels and the trial each window came from.
struct LabeledWindowSet {
  Eigen::MatrixXd features;  // rows = windows, cols = per-channel features concatenated in channel order
  std::vector<int> labels;
  std::vector<int> trial_ids;
  std::vector<double> window_start_ms;
  std::vector<std::string> class_names;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  // Throws std::invalid_argument on inconsistent sizes, < 2 classes, labels
  // out of range or non-finite features.
  void validate() const;
};

struct LdaOptions {
  // Ridge added to the pooled covariance as ridge * trace(S) / d * I.
  double ridge = 1e-6;
};

struct LdaModel {
  Eigen::MatrixXd means;       // K x d
  Eigen::MatrixXd covariance;  // d x d, regularized
  Eigen::VectorXd priors;      // K
  Eigen::MatrixXd weights;     // d x K, covariance^-1 * mean_k
  Eigen::VectorXd biases;      // K, -0.5 mean_k' covariance^-1 mean_k + ln prior_k
  std::vector<std::string> class_names;

  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(means.cols()); }
  [[nodiscard]] Eigen::VectorXd discriminants(std::span<const double> x) const;
};

// Pooled-covariance multi-class LDA with empirical priors. Every declared class
// needs at least 2 windows.
LdaModel lda_train(const LabeledWindowSet& data, const LdaOptions& opts = {});

// argmax_k of the linear discriminant; ties go to the lowest class index.
int lda_predict(const LdaModel& model, std::span<const double> x);

// Centered modal smoothing over `vote_window` (odd) decisions. Edges use the
// shorter available neighborhood; a tie for the mode keeps the raw label.
std::vector<int> majority_vote(std::span<const int> decisions, int vote_window);

struct FeatureSet {
  std::string name;
  std::vector<FeatureSpec> features;
};

// Aliases hudgins (MAV, WL, ZC, SSC), oskoei (RMS, AR order 2) and robust
// (HEMG, WAMP, MMNF); anything else is parsed as a '+'-joined feature list
// ("wl", "rms+ar:order=2"). Throws std::invalid_argument on unknown names.
FeatureSet feature_set(std::string_view name_or_list);
std::vector<FeatureSet> parse_feature_sets(std::string_view comma_separated);

struct NoiseLevel {
  std::optional<double> snr_db;  // nullopt: clean

  [[nodiscard]] std::string label() const;
};
// "clean" or an SNR in dB, e.g. "clean,20,15,10".
std::vector<NoiseLevel> parse_noise_levels(std::string_view comma_separated);

struct RecognitionConfig {
  SegmentationConfig segmentation{};
  int vote_window = 5;
  LdaOptions lda{};
  std::uint64_t seed = 0;
};

// Windows of the given trials, features extracted per channel and concatenated.
// `features` must have every HEMG range resolved. Noise, when given, is
// injected into each raw trial channel at the level's SNR before segmentation.
LabeledWindowSet extract_windows(const Dataset& ds, std::span<const std::size_t> trials, std::span<const FeatureSpec> features,
                                 const SegmentationConfig& seg, const NoiseLevel& noise = {}, std::uint64_t noise_seed = 0);

struct Decision {
  int trial = 0;
  double window_start_ms = 0.0;  // on the concatenated timeline of held-out trials
  int true_label = 0;
  int raw_label = 0;
  int mv_label = 0;
};

struct ClassificationReport {
  std::vector<std::string> class_names;
  double classification_rate = 0.0;  // percent, on majority-voted decisions
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<double> fold_rates;
  std::vector<Decision> decisions;
};

// Model trained for the fold that holds out `held_out`: HEMG ranges are
// resolved from the training trials only, so nothing from the held-out trial
// reaches the model.
struct FoldModel {
  LdaModel model;
  std::vector<FeatureSpec> features;
};
FoldModel train_fold(const Dataset& ds, const FeatureSet& set, const RecognitionConfig& cfg, std::size_t held_out);

// Leave-one-trial-out on clean data.
ClassificationReport leave_one_out(const Dataset& ds, const FeatureSet& set, const RecognitionConfig& cfg);

// Train on clean folds, test each held-out trial at every noise level.
struct FeatureSetEvaluation {
  std::vector<std::string> set_names;
  std::vector<NoiseLevel> levels;
  std::vector<std::vector<ClassificationReport>> reports;  // [set][level]
};
FeatureSetEvaluation evaluate_feature_sets(const Dataset& ds, std::span<const FeatureSet> sets, std::span<const NoiseLevel> levels,
                                           const RecognitionConfig& cfg);

nlohmann::json report_to_json(const ClassificationReport& report);
nlohmann::json evaluation_to_json(const FeatureSetEvaluation& eval);
nlohmann::json config_to_json(const RecognitionConfig& cfg);
// Table: set,<level labels...> with CR values.
void write_cr_table_csv(std::ostream& out, const FeatureSetEvaluation& eval);
// Columns: window_start_ms,true_label,raw_label,mv_label (class names).
void write_decisions_csv(std::ostream& out, const ClassificationReport& report);

}  // namespace emg

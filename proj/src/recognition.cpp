#include "emgrobust/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "emgrobust/noise.hpp"
#include "emgrobust/text.hpp"

namespace emg {

void LabeledWindowSet::validate() const {
  const auto n = static_cast<std::size_t>(features.rows());
  if (labels.size() != n || trial_ids.size() != n || (!window_start_ms.empty() && window_start_ms.size() != n)) {
    throw std::invalid_argument("window set: row, label and trial counts differ");
  }
  if (class_names.size() < 2) throw std::invalid_argument("window set: at least 2 classes are required");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= class_names.size()) throw std::invalid_argument("window set: label out of range");
  }
  if (!features.allFinite()) throw std::invalid_argument("window set: non-finite feature value");
}

Eigen::VectorXd LdaModel::discriminants(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw std::invalid_argument("lda: feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                                std::to_string(dimension()));
  }
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return weights.transpose() * v + biases;
}

LdaModel lda_train(const LabeledWindowSet& data, const LdaOptions& opts) {
  data.validate();
  if (!(opts.ridge >= 0.0)) throw std::invalid_argument("lda: ridge must be >= 0");
  const auto k = static_cast<Eigen::Index>(data.class_names.size());
  const auto d = data.features.cols();
  const auto n = data.features.rows();
  if (d < 1) throw std::invalid_argument("lda: feature dimension must be >= 1");

  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int l : data.labels) ++counts[static_cast<std::size_t>(l)];
  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] < 2) {
      throw std::invalid_argument("lda: class '" + data.class_names[static_cast<std::size_t>(c)] + "' has " +
                                  std::to_string(counts[static_cast<std::size_t>(c)]) + " windows, at least 2 are required");
    }
  }

  LdaModel m;
  m.class_names = data.class_names;
  m.means = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index i = 0; i < n; ++i) m.means.row(data.labels[static_cast<std::size_t>(i)]) += data.features.row(i);
  for (Eigen::Index c = 0; c < k; ++c) m.means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

  Eigen::MatrixXd centered = data.features;
  for (Eigen::Index i = 0; i < n; ++i) centered.row(i) -= m.means.row(data.labels[static_cast<std::size_t>(i)]);
  m.covariance = (centered.transpose() * centered) / static_cast<double>(n - k);
  const double mean_diag = m.covariance.trace() / static_cast<double>(d);
  m.covariance.diagonal().array() += opts.ridge * mean_diag;

  const Eigen::LLT<Eigen::MatrixXd> llt(m.covariance);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("lda: pooled covariance is not positive definite (constant or collinear features)");
  }
  m.priors.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) m.priors(c) = static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(n);

  m.weights = llt.solve(m.means.transpose());
  m.biases.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    m.biases(c) = -0.5 * m.means.row(c).dot(m.weights.col(c)) + std::log(m.priors(c));
  }
  return m;
}

int lda_predict(const LdaModel& model, std::span<const double> x) {
  const auto scores = model.discriminants(x);
  int best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c) {
    if (scores(c) > scores(best)) best = static_cast<int>(c);
  }
  return best;
}

std::vector<int> majority_vote(std::span<const int> decisions, int vote_window) {
  if (vote_window < 1 || vote_window % 2 == 0) throw std::invalid_argument("majority vote window must be a positive odd count");
  const auto half = static_cast<std::size_t>(vote_window / 2);
  const std::size_t n = decisions.size();
  std::vector<int> out(n);
  std::map<int, int> tally;
  for (std::size_t i = 0; i < n; ++i) {
    tally.clear();
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    for (std::size_t j = lo; j <= hi; ++j) ++tally[decisions[j]];
    int best_label = decisions[i];
    int best_count = 0;
    bool tie = false;
    for (const auto& [label, count] : tally) {
      if (count > best_count) {
        best_label = label;
        best_count = count;
        tie = false;
      } else if (count == best_count) {
        tie = true;
      }
    }
    out[i] = tie ? decisions[i] : best_label;
  }
  return out;
}

FeatureSet feature_set(std::string_view name_or_list) {
  const std::string name = trim(name_or_list);
  if (name == "hudgins") {
    return {name, {make_feature(FeatureKind::mav), make_feature(FeatureKind::wl), make_feature(FeatureKind::zc), make_feature(FeatureKind::ssc)}};
  }
  if (name == "oskoei") {
    auto ar = make_feature(FeatureKind::ar);
    ar.order = 2;
    return {name, {make_feature(FeatureKind::rms), ar}};
  }
  if (name == "robust") {
    return {name, {make_feature(FeatureKind::hemg), make_feature(FeatureKind::wamp), make_feature(FeatureKind::mmnf)}};
  }
  FeatureSet set{name, {}};
  for (const auto& item : split(name, '+')) {
    try {
      set.features.push_back(parse_feature(item));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("feature set '" + name + "': " + e.what() + " (aliases: hudgins, oskoei, robust)");
    }
  }
  return set;
}

std::vector<FeatureSet> parse_feature_sets(std::string_view comma_separated) {
  std::vector<FeatureSet> out;
  for (const auto& item : split(comma_separated, ',')) {
    if (!item.empty()) out.push_back(feature_set(item));
  }
  if (out.empty()) throw std::invalid_argument("no feature sets given");
  return out;
}

std::string NoiseLevel::label() const { return snr_db ? format_number(*snr_db) + " dB" : "clean"; }

std::vector<NoiseLevel> parse_noise_levels(std::string_view comma_separated) {
  std::vector<NoiseLevel> out;
  for (const auto& item : split(comma_separated, ',')) {
    if (item.empty()) continue;
    if (item == "clean") {
      out.push_back({});
      continue;
    }
    auto text = item;
    if (text.size() > 2 && text.substr(text.size() - 2) == "dB") text = trim(text.substr(0, text.size() - 2));
    const auto v = parse_double(text);
    if (!v || !std::isfinite(*v)) throw std::invalid_argument("noise level '" + item + "' is neither 'clean' nor an SNR in dB");
    out.push_back({*v});
  }
  if (out.empty()) throw std::invalid_argument("no noise levels given");
  return out;
}

LabeledWindowSet extract_windows(const Dataset& ds, std::span<const std::size_t> trials, std::span<const FeatureSpec> features,
                                 const SegmentationConfig& seg, const NoiseLevel& noise, std::uint64_t noise_seed) {
  std::size_t width_per_channel = 0;
  for (const auto& f : features) width_per_channel += f.width();
  const std::size_t channels = ds.channel_count();

  std::vector<std::vector<double>> rows;
  LabeledWindowSet out;
  out.class_names = ds.classes;
  for (std::size_t ti : trials) {
    const auto& trial = ds.trials.at(ti);
    const int label = ds.class_index(trial.label);
    std::vector<std::vector<Window>> per_channel;
    for (std::size_t c = 0; c < trial.channels.size(); ++c) {
      if (noise.snr_db) {
        const auto noisy = inject_at_snr(trial.channels[c], NoiseSpec{*noise.snr_db, derive_seed(noise_seed, {ti, c}), 0});
        per_channel.push_back(segment(noisy, seg));
      } else {
        per_channel.push_back(segment(trial.channels[c], seg));
      }
    }
    const std::size_t count = per_channel.front().size();
    for (std::size_t w = 0; w < count; ++w) {
      std::vector<double> row;
      row.reserve(width_per_channel * channels);
      for (const auto& ch : per_channel) {
        for (const auto& f : features) {
          const auto v = extract(f, ch[w].view(), ch[w].sampling_rate);
          row.insert(row.end(), v.begin(), v.end());
        }
      }
      rows.push_back(std::move(row));
      out.labels.push_back(label);
      out.trial_ids.push_back(static_cast<int>(ti));
      out.window_start_ms.push_back(per_channel.front()[w].start_ms());
    }
  }
  out.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width_per_channel * channels));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

FoldModel train_fold(const Dataset& ds, const FeatureSet& set, const RecognitionConfig& cfg, std::size_t held_out) {
  std::vector<std::size_t> train;
  for (std::size_t t = 0; t < ds.trials.size(); ++t) {
    if (t != held_out) train.push_back(t);
  }
  if (train.empty()) throw std::invalid_argument("recognition: leave-one-out needs at least 2 trials");
  FoldModel fm;
  fm.features = set.features;
  resolve_histogram_range(fm.features, max_abs_amplitude(ds, train));
  const auto data = extract_windows(ds, train, fm.features, cfg.segmentation);
  fm.model = lda_train(data, cfg.lda);
  return fm;
}

FeatureSetEvaluation evaluate_feature_sets(const Dataset& ds, std::span<const FeatureSet> sets, std::span<const NoiseLevel> levels,
                                           const RecognitionConfig& cfg) {
  if (ds.trials.size() < 2) throw std::invalid_argument("recognition: leave-one-out needs at least 2 trials");
  if (sets.empty() || levels.empty()) throw std::invalid_argument("recognition: need at least one feature set and noise level");
  if (cfg.vote_window < 1 || cfg.vote_window % 2 == 0) throw std::invalid_argument("majority vote window must be a positive odd count");
  const std::size_t k = ds.classes.size();

  FeatureSetEvaluation eval;
  eval.levels.assign(levels.begin(), levels.end());
  for (const auto& set : sets) {
    eval.set_names.push_back(set.name);
    std::vector<ClassificationReport> reports(levels.size());
    std::vector<std::size_t> correct(levels.size(), 0);
    std::vector<std::size_t> total(levels.size(), 0);
    std::vector<double> timeline(levels.size(), 0.0);
    for (auto& r : reports) {
      r.class_names = ds.classes;
      r.confusion.assign(k, std::vector<std::size_t>(k, 0));
    }

    for (std::size_t fold = 0; fold < ds.trials.size(); ++fold) {
      const auto fm = train_fold(ds, set, cfg, fold);
      const std::size_t held[] = {fold};
      for (std::size_t li = 0; li < levels.size(); ++li) {
        const auto test = extract_windows(ds, held, fm.features, cfg.segmentation, levels[li], derive_seed(cfg.seed, {fold, li}));
        std::vector<int> raw(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
          const Eigen::VectorXd row = test.features.row(static_cast<Eigen::Index>(i)).transpose();
          raw[i] = lda_predict(fm.model, std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
        }
        const auto voted = majority_vote(raw, cfg.vote_window);
        auto& rep = reports[li];
        std::size_t fold_correct = 0;
        for (std::size_t i = 0; i < test.size(); ++i) {
          const int truth = test.labels[i];
          rep.decisions.push_back(Decision{static_cast<int>(fold), timeline[li] + test.window_start_ms[i], truth, raw[i], voted[i]});
          ++rep.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(voted[i])];
          if (voted[i] == truth) ++fold_correct;
        }
        correct[li] += fold_correct;
        total[li] += test.size();
        rep.fold_rates.push_back(test.size() ? 100.0 * static_cast<double>(fold_correct) / static_cast<double>(test.size()) : 0.0);
        timeline[li] += ds.trials[fold].duration_ms();
      }
    }
    for (std::size_t li = 0; li < levels.size(); ++li) {
      reports[li].classification_rate = total[li] ? 100.0 * static_cast<double>(correct[li]) / static_cast<double>(total[li]) : 0.0;
    }
    eval.reports.push_back(std::move(reports));
  }
  return eval;
}

ClassificationReport leave_one_out(const Dataset& ds, const FeatureSet& set, const RecognitionConfig& cfg) {
  const FeatureSet sets[] = {set};
  const NoiseLevel clean[] = {NoiseLevel{}};
  return std::move(evaluate_feature_sets(ds, sets, clean, cfg).reports.front().front());
}

nlohmann::json report_to_json(const ClassificationReport& report) {
  auto decisions = nlohmann::json::array();
  for (const auto& d : report.decisions) {
    decisions.push_back({{"trial", d.trial},
                         {"window_start_ms", d.window_start_ms},
                         {"true_label", report.class_names[static_cast<std::size_t>(d.true_label)]},
                         {"raw_label", report.class_names[static_cast<std::size_t>(d.raw_label)]},
                         {"mv_label", report.class_names[static_cast<std::size_t>(d.mv_label)]}});
  }
  return {{"classification_rate", report.classification_rate},
          {"class_names", report.class_names},
          {"confusion", report.confusion},
          {"fold_rates", report.fold_rates},
          {"decisions", decisions}};
}

nlohmann::json evaluation_to_json(const FeatureSetEvaluation& eval) {
  auto sets = nlohmann::json::array();
  for (std::size_t s = 0; s < eval.set_names.size(); ++s) {
    auto levels = nlohmann::json::array();
    for (std::size_t l = 0; l < eval.levels.size(); ++l) {
      auto j = report_to_json(eval.reports[s][l]);
      j["level"] = eval.levels[l].label();
      levels.push_back(std::move(j));
    }
    sets.push_back({{"set", eval.set_names[s]}, {"levels", levels}});
  }
  return sets;
}

nlohmann::json config_to_json(const RecognitionConfig& cfg) {
  return {{"window_ms", cfg.segmentation.window_ms},
          {"slide_ms", cfg.segmentation.slide_ms},
          {"vote_window", cfg.vote_window},
          {"ridge", cfg.lda.ridge},
          {"seed", cfg.seed}};
}

void write_cr_table_csv(std::ostream& out, const FeatureSetEvaluation& eval) {
  out << "set";
  for (const auto& l : eval.levels) out << ',' << l.label();
  out << '\n';
  for (std::size_t s = 0; s < eval.set_names.size(); ++s) {
    out << eval.set_names[s];
    for (std::size_t l = 0; l < eval.levels.size(); ++l) out << ',' << format_number(eval.reports[s][l].classification_rate);
    out << '\n';
  }
}

void write_decisions_csv(std::ostream& out, const ClassificationReport& report) {
  out << "window_start_ms,true_label,raw_label,mv_label\n";
  for (const auto& d : report.decisions) {
    out << format_number(d.window_start_ms) << ',' << report.class_names[static_cast<std::size_t>(d.true_label)] << ','
        << report.class_names[static_cast<std::size_t>(d.raw_label)] << ',' << report.class_names[static_cast<std::size_t>(d.mv_label)]
        << '\n';
  }
}

}  // namespace emg

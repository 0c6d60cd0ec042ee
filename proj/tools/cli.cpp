#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "emgrobust/dataset.hpp"
#include "emgrobust/features.hpp"
#include "emgrobust/recognition.hpp"
#include "emgrobust/robustness.hpp"
#include "emgrobust/synth.hpp"
#include "emgrobust/text.hpp"

namespace emg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Turns configuration-level std::invalid_argument into a usage error.
template <typename F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Fills options not given on the command line from a JSON object whose keys are
// long option names. Accepts the "options" block of a resolved-config file too.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (doc.contains("options") && doc["options"].is_object()) doc = doc["options"];
  if (!doc.is_object()) throw UsageError("config file " + path + " must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") continue;
    auto* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("config file " + path + ": unknown option '" + key + "'");
    if (opt->count() > 0) continue;
    if (value.is_array() && value.empty()) continue;
    if (value.is_boolean() && opt->get_expected_max() == 0 && !value.get<bool>()) continue;
    std::vector<std::string> inputs;
    auto render = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.is_boolean() ? (v.get<bool>() ? "true" : "false") : v.dump(); };
    if (value.is_array()) {
      for (const auto& v : value) inputs.push_back(render(v));
    } else {
      inputs.push_back(render(value));
    }
    opt->clear();
    for (const auto& s : inputs) opt->add_result(s);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config file " + path + ": option '" + key + "': " + e.what());
    }
  }
}

json resolved_options(const CLI::App& sub) {
  json opts = json::object();
  for (const auto* opt : sub.get_options()) {
    const auto name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_expected_max() == 0) {
      opts[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      opts[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else {
      const auto d = opt->get_default_str();
      if (opt->get_expected_max() > 1) {
        opts[name] = json::array();
      } else {
        opts[name] = d;
      }
    }
  }
  return opts;
}

json resolved_config(const CLI::App& sub) { return {{"command", sub.get_name()}, {"options", resolved_options(sub)}}; }

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

Dataset load_input(const std::string& manifest, int decimate_by) {
  auto ds = load_dataset(manifest);
  if (decimate_by > 1) ds = decimate(ds, decimate_by);
  return ds;
}

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto v = parse_double(item);
    if (!v) throw UsageError("SNR level '" + item + "' is not numeric");
    out.push_back(*v);
  }
  if (out.empty()) throw UsageError("empty SNR list");
  return out;
}

// "name=motion:channel/motion:channel"
SignalGroup parse_group(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("group '" + text + "' must look like name=motion:channel/motion:channel");
  SignalGroup g{trim(text.substr(0, eq)), {}};
  for (const auto& m : split(text.substr(eq + 1), '/')) {
    const auto colon = m.find(':');
    if (colon == std::string::npos) throw UsageError("group member '" + m + "' must be motion:channel");
    g.members.emplace_back(trim(m.substr(0, colon)), trim(m.substr(colon + 1)));
  }
  return g;
}

std::string file_token(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  int classes = 4;
  int channels = 2;
  std::uint64_t seed = 0;
  std::string out;
  int trials_per_class = 6;
  double duration_ms = 2048.0;
  double sampling_rate = 1000.0;
  std::vector<std::string> bands;
  std::vector<double> amplitudes;
  std::size_t taps = 301;
  double envelope_ms = 256.0;
};

int cmd_synth(const CLI::App& sub, const SynthArgs& a, std::ostream& out) {
  auto cfg = as_usage([&] {
    auto c = default_synth_config(a.classes, a.channels, a.seed);
    c.trials_per_class = a.trials_per_class;
    c.trial_duration_ms = a.duration_ms;
    c.sampling_rate = a.sampling_rate;
    c.filter_taps = a.taps;
    c.envelope_ms = a.envelope_ms;
    if (!a.bands.empty()) {
      if (a.bands.size() != c.classes.size()) throw UsageError("--band must be given once per class");
      for (std::size_t k = 0; k < a.bands.size(); ++k) {
        const auto parts = split(a.bands[k], '-');
        const auto lo = parts.size() == 2 ? parse_double(parts[0]) : std::nullopt;
        const auto hi = parts.size() == 2 ? parse_double(parts[1]) : std::nullopt;
        if (!lo || !hi) throw UsageError("band '" + a.bands[k] + "' must look like LOW-HIGH in Hz");
        c.classes[k].band_low_hz = *lo;
        c.classes[k].band_high_hz = *hi;
      }
    }
    if (!a.amplitudes.empty()) {
      if (a.amplitudes.size() != c.classes.size()) throw UsageError("--amplitude must be given once per class");
      for (std::size_t k = 0; k < a.amplitudes.size(); ++k) c.classes[k].amplitude = a.amplitudes[k];
    }
    c.validate();
    return c;
  });
  const auto ds = synthesize_emg(cfg);
  const auto manifest = save_dataset(ds, a.out);
  json doc = resolved_config(sub);
  auto classes = json::array();
  for (const auto& c : cfg.classes) {
    classes.push_back({{"name", c.name}, {"band_low_hz", c.band_low_hz}, {"band_high_hz", c.band_high_hz}, {"amplitude", c.amplitude}, {"group", c.group}});
  }
  doc["synth"] = {{"classes", classes}, {"channels", cfg.channels}, {"seed", cfg.seed}, {"filter_taps", cfg.filter_taps}, {"envelope_ms", cfg.envelope_ms}};
  write_json(fs::path(a.out) / "synth_config.json", doc);
  out << "wrote " << ds.trials.size() << " trials to " << manifest.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string data;
  std::string features = "hemg,wamp,mmnf";
  double window_ms = 256.0;
  double slide_ms = 64.0;
  int decimate_by = 1;
  std::string out;
};

int cmd_extract(const CLI::App& sub, const ExtractArgs& a, std::ostream& out) {
  auto specs = as_usage([&] { return parse_feature_list(a.features); });
  const SegmentationConfig seg{a.window_ms, a.slide_ms};
  const auto ds = load_input(a.data, a.decimate_by);
  as_usage([&] { return seg.window_samples(ds.sampling_rate) + seg.slide_samples(ds.sampling_rate); });
  resolve_histogram_range(specs, max_abs_amplitude(ds));

  auto csv = open_out(a.out);
  csv << "trial,label,subject,group,window_start_ms";
  for (const auto& ch : ds.trials.front().channel_names) {
    for (const auto& f : specs) {
      if (f.width() == 1) {
        csv << ',' << ch << '.' << f.label();
      } else {
        for (std::size_t i = 0; i < f.width(); ++i) csv << ',' << ch << '.' << f.label() << '[' << i + 1 << ']';
      }
    }
  }
  csv << '\n';
  std::size_t rows = 0;
  for (std::size_t ti = 0; ti < ds.trials.size(); ++ti) {
    const std::size_t one[] = {ti};
    const auto set = extract_windows(ds, one, specs, seg);
    const auto& t = ds.trials[ti];
    for (std::size_t r = 0; r < set.size(); ++r) {
      csv << t.path << ',' << t.label << ',' << t.subject << ',' << t.group << ',' << format_number(set.window_start_ms[r]);
      for (Eigen::Index c = 0; c < set.features.cols(); ++c) csv << ',' << format_number(set.features(static_cast<Eigen::Index>(r), c));
      csv << '\n';
      ++rows;
    }
  }
  auto doc = resolved_config(sub);
  auto resolved = json::array();
  for (const auto& f : specs) resolved.push_back(f.label());
  doc["resolved_features"] = resolved;
  write_json(a.out + ".config.json", doc);
  out << "wrote " << rows << " windows to " << a.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RobustnessArgs {
  std::string data;
  std::string features;
  std::vector<std::string> sweeps;
  std::string snr = "20,15,10,5,3,0";
  int reps = 10;
  std::uint64_t seed = 0;
  double window_ms = 256.0;
  double slide_ms = 64.0;
  std::vector<std::string> groups;
  bool dry_run = false;
  bool full_vector = false;
  int decimate_by = 1;
  std::string out;
};

int cmd_robustness(const CLI::App& sub, const RobustnessArgs& a, std::ostream& out) {
  RobustnessConfig cfg;
  std::vector<FeatureSpec> specs;
  std::vector<ParameterSweep> sweeps;
  as_usage([&] {
    cfg.snr_grid = parse_snr_list(a.snr);
    cfg.repetitions = a.reps;
    cfg.seed = a.seed;
    cfg.segmentation = {a.window_ms, a.slide_ms};
    cfg.dry_run = a.dry_run;
    cfg.full_vector = a.full_vector;
    for (const auto& g : a.groups) cfg.signal_groups.push_back(parse_group(g));
    cfg.validate();
    for (const auto& s : a.sweeps) sweeps.push_back(parse_sweep(s));
    if (!a.features.empty()) {
      specs = parse_feature_list(a.features);
    } else if (sweeps.empty()) {
      specs = default_robustness_panel();
    }
    return 0;
  });
  const auto ds = load_input(a.data, a.decimate_by);

  RobustnessGrid grid;
  if (!specs.empty()) grid = run_grid(ds, specs, cfg);
  for (const auto& s : sweeps) {
    auto slice = sweep_parameters(ds, s, cfg);
    grid.cells.insert(grid.cells.end(), slice.cells.begin(), slice.cells.end());
  }

  {
    auto csv = open_out(a.out + ".csv");
    write_grid_csv(csv, grid);
  }
  auto doc = resolved_config(sub);
  doc["robustness"] = config_to_json(cfg);
  write_json(a.out + ".csv.config.json", doc);
  doc["cells"] = grid_to_json(grid);
  write_json(a.out + ".json", doc);
  out << "wrote " << grid.cells.size() << " cells to " << a.out << ".csv and " << a.out << ".json\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string data;
  std::string sets = "hudgins,oskoei,robust";
  std::string noise = "clean,20,15,10";
  int vote = 5;
  std::uint64_t seed = 0;
  double window_ms = 256.0;
  double slide_ms = 64.0;
  double ridge = 1e-6;
  int decimate_by = 1;
  std::string out;
};

int cmd_classify(const CLI::App& sub, const ClassifyArgs& a, std::ostream& out) {
  RecognitionConfig cfg;
  std::vector<FeatureSet> sets;
  std::vector<NoiseLevel> levels;
  as_usage([&] {
    sets = parse_feature_sets(a.sets);
    levels = parse_noise_levels(a.noise);
    if (a.vote < 1 || a.vote % 2 == 0) throw UsageError("--vote must be a positive odd count");
    if (!(a.ridge >= 0.0)) throw UsageError("--ridge must be >= 0");
    cfg.segmentation = {a.window_ms, a.slide_ms};
    cfg.vote_window = a.vote;
    cfg.lda.ridge = a.ridge;
    cfg.seed = a.seed;
    return 0;
  });
  const auto ds = load_input(a.data, a.decimate_by);
  const auto eval = evaluate_feature_sets(ds, sets, levels, cfg);

  {
    auto csv = open_out(a.out + ".csv");
    write_cr_table_csv(csv, eval);
  }
  auto doc = resolved_config(sub);
  doc["recognition"] = config_to_json(cfg);
  write_json(a.out + ".csv.config.json", doc);
  doc["results"] = evaluation_to_json(eval);
  write_json(a.out + ".json", doc);
  for (std::size_t s = 0; s < eval.set_names.size(); ++s) {
    for (std::size_t l = 0; l < eval.levels.size(); ++l) {
      const auto path = a.out + ".decisions." + file_token(eval.set_names[s]) + "." + file_token(eval.levels[l].label()) + ".csv";
      {
        auto csv = open_out(path);
        write_decisions_csv(csv, eval.reports[s][l]);
      }
      auto sidecar = resolved_config(sub);
      sidecar["recognition"] = config_to_json(cfg);
      sidecar["set"] = eval.set_names[s];
      sidecar["noise"] = eval.levels[l].label();
      write_json(path + ".config.json", sidecar);
    }
  }
  write_cr_table_csv(out, eval);
  return kExitOk;
}

void add_segmentation(CLI::App* sub, double& window_ms, double& slide_ms) {
  sub->add_option("--window-ms", window_ms, "Analysis window length in ms");
  sub->add_option("--slide-ms", slide_ms, "Window slide in ms");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EMG feature robustness and recognition toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic labeled sEMG dataset");
  s->option_defaults()->always_capture_default();
  std::string s_config;
  s->add_option("--config", s_config, "JSON file with option values");
  s->add_option("--classes", synth.classes, "Number of motion classes")->check(CLI::PositiveNumber);
  s->add_option("--channels", synth.channels, "Number of channels")->check(CLI::PositiveNumber);
  s->add_option("--seed", synth.seed, "Generator seed");
  s->add_option("--out", synth.out, "Output directory (required)");
  s->add_option("--trials-per-class", synth.trials_per_class, "Trials per class")->check(CLI::PositiveNumber);
  s->add_option("--duration-ms", synth.duration_ms, "Trial duration in ms");
  s->add_option("--fs", synth.sampling_rate, "Sampling rate in Hz");
  s->add_option("--band", synth.bands, "Per-class band LOW-HIGH in Hz (once per class)")->default_str("");
  s->add_option("--amplitude", synth.amplitudes, "Per-class RMS amplitude (once per class)")->default_str("");
  s->add_option("--taps", synth.taps, "Bandpass filter length (odd)");
  s->add_option("--envelope-ms", synth.envelope_ms, "Amplitude envelope length in ms (0: plain filtered noise)");

  ExtractArgs extract;
  auto* e = app.add_subcommand("extract", "Window a dataset and write per-window features");
  e->option_defaults()->always_capture_default();
  std::string e_config;
  e->add_option("--config", e_config, "JSON file with option values");
  e->add_option("--data", extract.data, "Dataset manifest JSON (required)");
  e->add_option("--features", extract.features, "Comma-separated feature specs");
  add_segmentation(e, extract.window_ms, extract.slide_ms);
  e->add_option("--decimate", extract.decimate_by, "Integer downsampling factor")->check(CLI::PositiveNumber);
  e->add_option("--out", extract.out, "Output CSV (required)");

  RobustnessArgs robust;
  auto* r = app.add_subcommand("robustness", "Percentage error of features under white Gaussian noise");
  r->option_defaults()->always_capture_default();
  std::string r_config;
  r->add_option("--config", r_config, "JSON file with option values");
  r->add_option("--data", robust.data, "Dataset manifest JSON (required)");
  r->add_option("--features", robust.features, "Comma-separated feature specs (default: representative panel)");
  r->add_option("--sweep", robust.sweeps, "Parameter sweep, e.g. wamp:threshold=10..50:10")->default_str("");
  r->add_option("--snr", robust.snr, "Comma-separated SNR grid in dB");
  r->add_option("--reps", robust.reps, "Noise repetitions per level")->check(CLI::PositiveNumber);
  r->add_option("--seed", robust.seed, "Noise seed");
  add_segmentation(r, robust.window_ms, robust.slide_ms);
  r->add_option("--group", robust.groups, "Signal group name=motion:channel/motion:channel")->default_str("");
  r->add_flag("--dry-run", robust.dry_run, "Bypass noise injection");
  r->add_flag("--full-vector", robust.full_vector, "Average PE over all elements of vector features");
  r->add_option("--decimate", robust.decimate_by, "Integer downsampling factor")->check(CLI::PositiveNumber);
  r->add_option("--out", robust.out, "Output prefix for .csv and .json (required)");

  ClassifyArgs classify;
  auto* c = app.add_subcommand("classify", "Leave-one-trial-out LDA recognition at several noise levels");
  c->option_defaults()->always_capture_default();
  std::string c_config;
  c->add_option("--config", c_config, "JSON file with option values");
  c->add_option("--data", classify.data, "Dataset manifest JSON (required)");
  c->add_option("--sets", classify.sets, "Feature sets: hudgins, oskoei, robust or feat+feat lists");
  c->add_option("--noise", classify.noise, "Noise levels: clean and/or SNRs in dB");
  c->add_option("--vote", classify.vote, "Majority vote window (odd)");
  c->add_option("--seed", classify.seed, "Noise seed");
  add_segmentation(c, classify.window_ms, classify.slide_ms);
  c->add_option("--ridge", classify.ridge, "Relative ridge added to the pooled covariance");
  c->add_option("--decimate", classify.decimate_by, "Integer downsampling factor")->check(CLI::PositiveNumber);
  c->add_option("--out", classify.out, "Output prefix (required)");

  // --out and --data are checked after any --config file has been applied.
  struct ConfigBinding {
    CLI::App* sub;
    std::string* path;
  };
  const ConfigBinding bindings[] = {{s, &s_config}, {e, &e_config}, {r, &r_config}, {c, &c_config}};

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    for (const auto& b : bindings) {
      if (!b.sub->parsed()) continue;
      if (!b.path->empty()) apply_config_file(*b.sub, *b.path);
      for (const char* required : {"--out", "--data"}) {
        auto* opt = b.sub->get_option_no_throw(required);
        if (opt != nullptr && opt->count() == 0) throw UsageError(std::string(required) + " is required");
      }
    }
    if (s->parsed()) return cmd_synth(*s, synth, out);
    if (e->parsed()) return cmd_extract(*e, extract, out);
    if (r->parsed()) return cmd_robustness(*r, robust, out);
    if (c->parsed()) return cmd_classify(*c, classify, out);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace emg::cli

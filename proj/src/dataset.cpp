#include "emgrobust/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emgrobust/fir.hpp"
#include "emgrobust/text.hpp"

namespace emg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename T>
T require_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

}  // namespace

int Dataset::class_index(const std::string& label) const {
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) throw UnknownLabelError("unknown label '" + label + "'");
  return static_cast<int>(it - classes.begin());
}

std::size_t Dataset::channel_count() const { return trials.empty() ? 0 : trials.front().channels.size(); }

void Dataset::validate() const {
  if (!(sampling_rate > 0.0)) throw SchemaError("dataset sampling rate must be positive");
  if (classes.empty()) throw SchemaError("dataset declares no classes");
  for (const auto& t : trials) {
    (void)class_index(t.label);
    if (t.channels.empty()) throw SchemaError("trial '" + t.path + "' has no channels");
    if (t.channels.size() != channel_count()) {
      throw SchemaError("trial '" + t.path + "' has " + std::to_string(t.channels.size()) + " channels, expected " +
                        std::to_string(channel_count()));
    }
    if (t.channel_names.size() != t.channels.size()) throw SchemaError("trial '" + t.path + "' channel names do not match data");
    for (const auto& ch : t.channels) {
      if (ch.sampling_rate() != sampling_rate) {
        throw RateMismatchError("trial '" + t.path + "' sampled at " + format_number(ch.sampling_rate()) +
                                " Hz, dataset rate is " + format_number(sampling_rate) + " Hz");
      }
      if (ch.size() != t.length()) throw SchemaError("trial '" + t.path + "' channels differ in length");
    }
  }
}

TrialTable read_trial_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError("cannot open trial file " + path.string());
  TrialTable table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  table.channel_names = split_row(line);
  if (table.channel_names.empty()) throw ParseError(path.string() + ": header row has no channel names");
  table.columns.assign(table.channel_names.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != table.channel_names.size()) {
      throw ParseError(path.string() + ":" + std::to_string(row) + ": expected " + std::to_string(table.channel_names.size()) +
                       " values, got " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(path.string() + ":" + std::to_string(row) + ": non-numeric sample '" + cells[c] + "'");
      }
      table.columns[c].push_back(*v);
    }
  }
  if (table.columns.front().empty()) throw ParseError(path.string() + ": no samples");
  return table;
}

void write_trial_csv(const fs::path& path, const std::vector<std::string>& channel_names, const std::vector<Signal>& channels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t c = 0; c < channel_names.size(); ++c) out << (c ? "," : "") << channel_names[c];
  out << '\n';
  const std::size_t n = channels.empty() ? 0 : channels.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < channels.size(); ++c) out << (c ? "," : "") << format_number(channels[c].samples()[i]);
    out << '\n';
  }
}

Dataset load_dataset(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw MissingFileError("cannot open manifest " + manifest.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(manifest.string() + ": invalid JSON (" + e.what() + ")");
  }
  const std::string where = manifest.string();
  Dataset ds;
  ds.classes = require_field<std::vector<std::string>>(doc, "classes", where);
  ds.sampling_rate = require_field<double>(doc, "sampling_rate_hz", where);
  if (!(ds.sampling_rate > 0.0)) throw SchemaError(where + ": sampling_rate_hz must be positive");
  const auto trials = require_field<json>(doc, "trials", where);
  if (!trials.is_array()) throw SchemaError(where + ": 'trials' must be an array");

  const fs::path base = manifest.parent_path();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& entry = trials[i];
    const std::string tw = where + ": trial " + std::to_string(i);
    Trial t;
    t.path = require_field<std::string>(entry, "path", tw);
    t.label = require_field<std::string>(entry, "label", tw);
    t.subject = entry.value("subject", std::string{});
    t.group = entry.value("group", std::string{});
    t.channel_names = require_field<std::vector<std::string>>(entry, "channels", tw);
    if (std::find(ds.classes.begin(), ds.classes.end(), t.label) == ds.classes.end()) {
      throw UnknownLabelError(tw + ": label '" + t.label + "' is not among the declared classes");
    }
    if (entry.contains("sampling_rate_hz")) {
      const double rate = require_field<double>(entry, "sampling_rate_hz", tw);
      if (rate != ds.sampling_rate) {
        throw RateMismatchError(tw + " (" + t.path + "): declared rate " + format_number(rate) + " Hz differs from dataset rate " +
                                format_number(ds.sampling_rate) + " Hz");
      }
    }
    const fs::path file = base / t.path;
    if (!fs::exists(file)) throw MissingFileError(tw + ": missing file " + file.string());
    auto table = read_trial_csv(file);
    if (table.channel_names != t.channel_names) {
      throw SchemaError(tw + ": CSV channel names do not match the manifest");
    }
    for (auto& col : table.columns) t.channels.emplace_back(std::move(col), ds.sampling_rate);
    ds.trials.push_back(std::move(t));
  }
  ds.validate();
  return ds;
}

fs::path save_dataset(const Dataset& dataset, const fs::path& dir) {
  dataset.validate();
  fs::create_directories(dir);
  json trials = json::array();
  for (const auto& t : dataset.trials) {
    write_trial_csv(dir / t.path, t.channel_names, t.channels);
    trials.push_back({{"path", t.path}, {"label", t.label}, {"subject", t.subject}, {"group", t.group}, {"channels", t.channel_names}});
  }
  json doc = {{"classes", dataset.classes}, {"sampling_rate_hz", dataset.sampling_rate}, {"trials", trials}};
  const fs::path manifest = dir / "manifest.json";
  std::ofstream out(manifest);
  if (!out) throw DataError("cannot write " + manifest.string());
  out << doc.dump(2) << '\n';
  return manifest;
}

Signal decimate(const Signal& signal, int factor) {
  if (factor < 1) throw std::invalid_argument("decimate: factor must be >= 1");
  if (factor == 1) return signal;
  const double rate = signal.sampling_rate();
  const double new_nyquist = rate / (2.0 * factor);
  const auto taps = fir::kaiser_lowpass(0.8 * new_nyquist, 0.2 * new_nyquist, 60.0, rate);
  const auto filtered = fir::filter_centered(signal.view(), taps);
  std::vector<double> out;
  out.reserve(filtered.size() / static_cast<std::size_t>(factor) + 1);
  for (std::size_t i = 0; i < filtered.size(); i += static_cast<std::size_t>(factor)) out.push_back(filtered[i]);
  return Signal(std::move(out), rate / factor);
}

Dataset decimate(const Dataset& dataset, int factor) {
  Dataset out = dataset;
  out.sampling_rate = dataset.sampling_rate / factor;
  for (auto& t : out.trials) {
    for (auto& ch : t.channels) ch = decimate(ch, factor);
  }
  return out;
}

}  // namespace emg

#include "emgrobust/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emgrobust/dataset.hpp"
#include "emgrobust/freq_features.hpp"
#include "emgrobust/text.hpp"
#include "emgrobust/time_features.hpp"

namespace emg {

namespace {

struct KindName {
  FeatureKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {FeatureKind::iemg, "iemg"}, {FeatureKind::mav, "mav"},   {FeatureKind::mmav1, "mmav1"}, {FeatureKind::mmav2, "mmav2"},
    {FeatureKind::mavslp, "mavslp"}, {FeatureKind::ssi, "ssi"}, {FeatureKind::var, "var"},   {FeatureKind::rms, "rms"},
    {FeatureKind::wl, "wl"},     {FeatureKind::zc, "zc"},     {FeatureKind::ssc, "ssc"},     {FeatureKind::wamp, "wamp"},
    {FeatureKind::hemg, "hemg"}, {FeatureKind::ar, "ar"},     {FeatureKind::mnf, "mnf"},     {FeatureKind::mdf, "mdf"},
    {FeatureKind::mmnf, "mmnf"}, {FeatureKind::mmdf, "mmdf"},
};

bool uses_threshold(FeatureKind k) { return k == FeatureKind::zc || k == FeatureKind::ssc || k == FeatureKind::wamp; }
bool is_moment(FeatureKind k) {
  return k == FeatureKind::mnf || k == FeatureKind::mdf || k == FeatureKind::mmnf || k == FeatureKind::mmdf;
}

std::string joined_names() {
  std::string out;
  for (const auto& k : kKinds) out += (out.empty() ? "" : ", ") + std::string(k.name);
  return out;
}

std::vector<double> to_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

std::string FeatureSpec::name() const {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

std::string FeatureSpec::parameters() const {
  std::vector<std::string> parts;
  if (uses_threshold(kind)) parts.push_back("threshold=" + format_number(threshold));
  if (kind == FeatureKind::hemg) {
    parts.push_back("bins=" + std::to_string(bins));
    if (range) parts.push_back("range=" + format_number(*range));
  }
  if (kind == FeatureKind::ar) parts.push_back("order=" + std::to_string(order));
  if (kind == FeatureKind::mavslp) parts.push_back("segments=" + std::to_string(segments));
  if (is_vector()) parts.push_back("element=" + std::to_string(element));
  if (is_moment(kind) && !include_dc) parts.push_back("dc=0");
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ";") + p;
  return out;
}

std::string FeatureSpec::label() const {
  const auto p = parameters();
  return p.empty() ? name() : name() + "(" + p + ")";
}

bool FeatureSpec::is_vector() const {
  return kind == FeatureKind::hemg || kind == FeatureKind::ar || kind == FeatureKind::mavslp;
}

std::size_t FeatureSpec::width() const {
  switch (kind) {
    case FeatureKind::hemg: return static_cast<std::size_t>(bins);
    case FeatureKind::ar: return static_cast<std::size_t>(order);
    case FeatureKind::mavslp: return static_cast<std::size_t>(segments - 1);
    default: return 1;
  }
}

FeatureSpec make_feature(FeatureKind kind) {
  FeatureSpec s;
  s.kind = kind;
  switch (kind) {
    case FeatureKind::zc:
    case FeatureKind::wamp: s.threshold = 10.0; break;
    case FeatureKind::ssc: s.threshold = 30.0; break;
    case FeatureKind::hemg:
      s.bins = 3;
      s.element = 2;
      break;
    default: break;
  }
  return s;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& k : kKinds) v.emplace_back(k.name);
    return v;
  }();
  return names;
}

void set_parameter(FeatureSpec& spec, std::string_view key, double value) {
  const std::string k(key);
  auto require_int = [&](double lo) {
    if (value != std::floor(value) || value < lo) {
      throw std::invalid_argument(spec.name() + ": " + k + " must be an integer >= " + format_number(lo));
    }
    return static_cast<int>(value);
  };
  if (k == "threshold" && uses_threshold(spec.kind)) {
    if (!(value >= 0.0)) throw std::invalid_argument(spec.name() + ": threshold must be >= 0");
    spec.threshold = value;
  } else if (k == "bins" && spec.kind == FeatureKind::hemg) {
    spec.bins = require_int(1);
  } else if (k == "range" && spec.kind == FeatureKind::hemg) {
    if (!(value > 0.0)) throw std::invalid_argument("hemg: range must be > 0");
    spec.range = value;
  } else if (k == "order" && spec.kind == FeatureKind::ar) {
    spec.order = require_int(1);
  } else if (k == "segments" && spec.kind == FeatureKind::mavslp) {
    spec.segments = require_int(2);
  } else if (k == "element" && spec.is_vector()) {
    spec.element = static_cast<std::size_t>(require_int(1));
  } else if (k == "dc" && is_moment(spec.kind)) {
    spec.include_dc = value != 0.0;
  } else {
    throw std::invalid_argument("feature '" + spec.name() + "' has no parameter '" + k + "'");
  }
  if (spec.is_vector() && spec.element > spec.width()) {
    // Keep the scalar element valid when the vector shrinks.
    if (k == "element") throw std::invalid_argument(spec.name() + ": element exceeds feature width");
    spec.element = std::min(spec.element, spec.width());
  }
}

FeatureSpec parse_feature(std::string_view text) {
  const auto parts = split(text, ':');
  const auto& name = parts.front();
  const auto it = std::find_if(std::begin(kKinds), std::end(kKinds), [&](const KindName& k) { return name == k.name; });
  if (it == std::end(kKinds)) {
    throw std::invalid_argument("unknown feature '" + name + "'; valid features: " + joined_names());
  }
  auto spec = make_feature(it->kind);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw std::invalid_argument("feature parameter '" + parts[i] + "' is not key=value");
    const auto value = parse_double(trim(parts[i].substr(eq + 1)));
    if (!value) throw std::invalid_argument("feature parameter '" + parts[i] + "' has a non-numeric value");
    set_parameter(spec, trim(parts[i].substr(0, eq)), *value);
  }
  return spec;
}

std::vector<FeatureSpec> parse_feature_list(std::string_view comma_separated) {
  std::vector<FeatureSpec> out;
  for (const auto& item : split(comma_separated, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_feature(item));
  }
  if (out.empty()) throw std::invalid_argument("empty feature list");
  return out;
}

std::vector<double> extract(const FeatureSpec& spec, std::span<const double> x, double sampling_rate) {
  const MomentOptions mo{spec.include_dc};
  switch (spec.kind) {
    case FeatureKind::iemg: return {iemg(x)};
    case FeatureKind::mav: return {mav(x)};
    case FeatureKind::mmav1: return {mmav1(x)};
    case FeatureKind::mmav2: return {mmav2(x)};
    case FeatureKind::mavslp: return mavslp(x, MavslpParams{spec.segments});
    case FeatureKind::ssi: return {ssi(x)};
    case FeatureKind::var: return {var(x)};
    case FeatureKind::rms: return {rms(x)};
    case FeatureKind::wl: return {wl(x)};
    case FeatureKind::zc: return {static_cast<double>(zc(x, spec.threshold))};
    case FeatureKind::ssc: return {static_cast<double>(ssc(x, spec.threshold))};
    case FeatureKind::wamp: return {static_cast<double>(wamp(x, spec.threshold))};
    case FeatureKind::hemg:
      if (!spec.range) throw std::invalid_argument("hemg: amplitude range has not been resolved");
      return to_doubles(hemg(x, HistogramParams{spec.bins, *spec.range}));
    case FeatureKind::ar: return ar_coefficients(x, spec.order).coefficients;
    case FeatureKind::mnf: return {mnf(power_spectrum(amplitude_spectrum(x, sampling_rate)), mo)};
    case FeatureKind::mdf: return {mdf(power_spectrum(amplitude_spectrum(x, sampling_rate)), mo)};
    case FeatureKind::mmnf: return {mmnf(amplitude_spectrum(x, sampling_rate), mo)};
    case FeatureKind::mmdf: return {mmdf(amplitude_spectrum(x, sampling_rate), mo)};
  }
  throw std::logic_error("unhandled feature kind");
}

double extract_scalar(const FeatureSpec& spec, std::span<const double> x, double sampling_rate) {
  const auto v = extract(spec, x, sampling_rate);
  if (!spec.is_vector()) return v.front();
  if (spec.element < 1 || spec.element > v.size()) {
    throw std::invalid_argument(spec.name() + ": element " + std::to_string(spec.element) + " outside 1.." + std::to_string(v.size()));
  }
  return v[spec.element - 1];
}

void resolve_histogram_range(std::vector<FeatureSpec>& specs, double max_abs) {
  for (auto& s : specs) {
    if (s.kind != FeatureKind::hemg || s.range) continue;
    if (!(max_abs > 0.0)) throw std::invalid_argument("hemg: cannot derive a range from an all-zero dataset");
    s.range = max_abs;
  }
}

double max_abs_amplitude(const Dataset& ds, std::span<const std::size_t> trials) {
  double m = 0.0;
  auto scan = [&](const Trial& t) {
    for (const auto& ch : t.channels) {
      for (double v : ch.samples()) m = std::max(m, std::abs(v));
    }
  };
  if (trials.empty()) {
    for (const auto& t : ds.trials) scan(t);
  } else {
    for (auto i : trials) scan(ds.trials.at(i));
  }
  return m;
}

}  // namespace emg

#include "emgrobust/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "emgrobust/noise.hpp"
#include "emgrobust/text.hpp"

namespace emg {

namespace {

// Welford accumulator.
struct PeStats {
  std::size_t n = 0;
  std::size_t excluded = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  [[nodiscard]] double stddev() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0; }
};

// Feature index, group, class index, snr index.
using CellKey = std::tuple<std::size_t, std::string, int, std::size_t>;

std::vector<std::string> groups_for(const RobustnessConfig& cfg, const Trial& trial, const std::string& channel) {
  if (cfg.signal_groups.empty()) return {trial.group.empty() ? std::string("all") : trial.group};
  std::vector<std::string> out;
  for (const auto& g : cfg.signal_groups) {
    for (const auto& [motion, ch] : g.members) {
      if (motion == trial.label && ch == channel) {
        out.push_back(g.name);
        break;
      }
    }
  }
  return out;
}

// Clean-reference value(s) for PE: the scalar element, or the full vector.
std::vector<double> reference_values(const FeatureSpec& spec, std::span<const double> x, double rate, bool full_vector) {
  if (full_vector && spec.is_vector()) return extract(spec, x, rate);
  return {extract_scalar(spec, x, rate)};
}

// Mean PE across elements with a defined PE; nullopt if none is defined.
std::optional<double> vector_pe(std::span<const double> clean, std::span<const double> noisy) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (clean[i] == 0.0) continue;
    acc += percentage_error(clean[i], noisy[i]);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return acc / static_cast<double>(count);
}

bool same_snr(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

double percentage_error(double clean_value, double noisy_value) {
  if (clean_value == 0.0) throw std::domain_error("percentage error is undefined for a zero clean value");
  return std::abs((clean_value - noisy_value) / clean_value) * 100.0;
}

void RobustnessConfig::validate() const {
  if (snr_grid.empty()) throw std::invalid_argument("robustness: SNR grid is empty");
  for (double s : snr_grid) {
    if (!std::isfinite(s)) throw std::invalid_argument("robustness: SNR levels must be finite");
  }
  if (repetitions < 1) throw std::invalid_argument("robustness: repetitions must be >= 1");
}

double RobustnessGrid::pooled_mean(std::string_view feature, double snr_db, std::string_view parameters,
                                   std::string_view group) const {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (c.feature != feature || !same_snr(c.snr_db, snr_db)) continue;
    if (!parameters.empty() && c.parameters != parameters) continue;
    if (!group.empty() && c.group != group) continue;
    acc += c.mean_pe * static_cast<double>(c.n);
    n += c.n;
  }
  if (n == 0) throw std::out_of_range("no robustness cells for feature '" + std::string(feature) + "'");
  return acc / static_cast<double>(n);
}

std::size_t RobustnessGrid::pooled_count(std::string_view feature, double snr_db) const {
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (c.feature == feature && same_snr(c.snr_db, snr_db)) n += c.n;
  }
  return n;
}

RobustnessGrid run_grid(const Dataset& dataset, std::span<const FeatureSpec> features, const RobustnessConfig& cfg) {
  cfg.validate();
  if (features.empty()) throw std::invalid_argument("robustness: no features requested");
  std::vector<FeatureSpec> specs(features.begin(), features.end());
  resolve_histogram_range(specs, max_abs_amplitude(dataset));

  std::map<CellKey, PeStats> stats;
  const auto reps = static_cast<std::size_t>(cfg.repetitions);

  for (std::size_t ti = 0; ti < dataset.trials.size(); ++ti) {
    const auto& trial = dataset.trials[ti];
    const int cls = dataset.class_index(trial.label);
    for (std::size_t ci = 0; ci < trial.channels.size(); ++ci) {
      const auto groups = groups_for(cfg, trial, trial.channel_names[ci]);
      if (groups.empty()) continue;
      const auto windows = segment(trial.channels[ci], cfg.segmentation);
      for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const auto& w = windows[wi];

        std::vector<std::optional<std::vector<double>>> clean(specs.size());
        for (std::size_t fi = 0; fi < specs.size(); ++fi) {
          try {
            clean[fi] = reference_values(specs[fi], w.view(), w.sampling_rate, cfg.full_vector);
          } catch (const std::exception&) {
            clean[fi].reset();
          }
        }

        for (std::size_t si = 0; si < cfg.snr_grid.size(); ++si) {
          const auto seed = derive_seed(cfg.seed, {ti, ci, wi, si});
          for (std::size_t r = 0; r < reps; ++r) {
            std::vector<double> noisy;
            bool noise_ok = true;
            if (cfg.dry_run) {
              noisy = w.samples;
            } else {
              try {
                noisy = inject_at_snr(w.view(), NoiseSpec{cfg.snr_grid[si], seed, r});
              } catch (const std::domain_error&) {
                noise_ok = false;  // zero-power window
              }
            }
            for (std::size_t fi = 0; fi < specs.size(); ++fi) {
              std::optional<double> pe;
              if (noise_ok && clean[fi]) {
                try {
                  const auto nv = reference_values(specs[fi], noisy, w.sampling_rate, cfg.full_vector);
                  pe = vector_pe(*clean[fi], nv);
                } catch (const std::exception&) {
                  pe.reset();
                }
              }
              for (const auto& g : groups) {
                auto& s = stats[CellKey{fi, g, cls, si}];
                if (pe) {
                  s.add(*pe);
                } else {
                  ++s.excluded;
                }
              }
            }
          }
        }
      }
    }
  }

  RobustnessGrid grid;
  for (const auto& [key, s] : stats) {
    const auto& [fi, group, cls, si] = key;
    grid.cells.push_back(RobustnessCell{specs[fi].name(), specs[fi].parameters(), group,
                                        dataset.classes[static_cast<std::size_t>(cls)], cfg.snr_grid[si], s.mean, s.stddev(), s.n,
                                        s.excluded});
  }
  return grid;
}

ParameterSweep parse_sweep(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("sweep '" + std::string(text) + "' must look like feature:key=values");
  ParameterSweep sweep;
  sweep.base = parse_feature(text.substr(0, colon));
  const std::string rest(text.substr(colon + 1));
  const auto eq = rest.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("sweep '" + std::string(text) + "' lacks key=values");
  sweep.key = trim(rest.substr(0, eq));
  const std::string values = rest.substr(eq + 1);

  const auto dots = values.find("..");
  if (dots != std::string::npos) {
    const auto step_pos = values.find(':', dots);
    const auto lo = parse_double(trim(values.substr(0, dots)));
    const auto hi = parse_double(trim(values.substr(dots + 2, step_pos == std::string::npos ? std::string::npos : step_pos - dots - 2)));
    const auto step = step_pos == std::string::npos ? std::optional<double>(1.0) : parse_double(trim(values.substr(step_pos + 1)));
    if (!lo || !hi || !step || !(*step > 0.0) || *hi < *lo) {
      throw std::invalid_argument("sweep range '" + values + "' must be start..stop[:step] with step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((*hi - *lo) / *step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) sweep.values.push_back(*lo + *step * static_cast<double>(i));
  } else {
    for (const auto& v : split(values, '/')) {
      const auto d = parse_double(v);
      if (!d) throw std::invalid_argument("sweep value '" + v + "' is not numeric");
      sweep.values.push_back(*d);
    }
  }
  // Validate every value up front.
  for (double v : sweep.values) {
    auto probe = sweep.base;
    set_parameter(probe, sweep.key, v);
  }
  return sweep;
}

RobustnessGrid sweep_parameters(const Dataset& dataset, const ParameterSweep& sweep, const RobustnessConfig& cfg) {
  RobustnessGrid merged;
  for (double v : sweep.values) {
    auto spec = sweep.base;
    set_parameter(spec, sweep.key, v);
    const FeatureSpec one[] = {spec};
    auto slice = run_grid(dataset, one, cfg);
    merged.cells.insert(merged.cells.end(), slice.cells.begin(), slice.cells.end());
  }
  return merged;
}

void write_grid_csv(std::ostream& out, const RobustnessGrid& grid) {
  out << "feature,parameters,group,motion,snr_db,mean_pe,std_pe,n,excluded\n";
  for (const auto& c : grid.cells) {
    out << c.feature << ',' << c.parameters << ',' << c.group << ',' << c.motion << ',' << format_number(c.snr_db) << ','
        << format_number(c.mean_pe) << ',' << format_number(c.std_pe) << ',' << c.n << ',' << c.excluded << '\n';
  }
}

nlohmann::json grid_to_json(const RobustnessGrid& grid) {
  auto cells = nlohmann::json::array();
  for (const auto& c : grid.cells) {
    cells.push_back({{"feature", c.feature},
                     {"parameters", c.parameters},
                     {"group", c.group},
                     {"motion", c.motion},
                     {"snr_db", c.snr_db},
                     {"mean_pe", c.mean_pe},
                     {"std_pe", c.std_pe},
                     {"n", c.n},
                     {"excluded", c.excluded}});
  }
  return cells;
}

nlohmann::json config_to_json(const RobustnessConfig& cfg) {
  auto groups = nlohmann::json::array();
  for (const auto& g : cfg.signal_groups) {
    auto members = nlohmann::json::array();
    for (const auto& [motion, ch] : g.members) members.push_back({{"motion", motion}, {"channel", ch}});
    groups.push_back({{"name", g.name}, {"members", members}});
  }
  return {{"snr_grid", cfg.snr_grid},
          {"repetitions", cfg.repetitions},
          {"seed", cfg.seed},
          {"window_ms", cfg.segmentation.window_ms},
          {"slide_ms", cfg.segmentation.slide_ms},
          {"signal_groups", groups},
          {"dry_run", cfg.dry_run},
          {"full_vector", cfg.full_vector}};
}

std::vector<FeatureSpec> default_robustness_panel() {
  return {make_feature(FeatureKind::rms),  make_feature(FeatureKind::zc),   make_feature(FeatureKind::wamp),
          make_feature(FeatureKind::ssc),  make_feature(FeatureKind::hemg), make_feature(FeatureKind::ar),
          make_feature(FeatureKind::mnf),  make_feature(FeatureKind::mdf),  make_feature(FeatureKind::mmnf),
          make_feature(FeatureKind::mmdf)};
}

}  // namespace emg

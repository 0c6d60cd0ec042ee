#include "emgrobust/time_features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace emg {

namespace {

void require_length(std::span<const double> x, std::size_t min_len, const char* feature) {
  if (x.size() < min_len) {
    throw std::invalid_argument(std::string(feature) + ": window needs at least " + std::to_string(min_len) +
                                " samples, got " + std::to_string(x.size()));
  }
}

void require_threshold(double threshold, const char* feature) {
  if (!(threshold >= 0.0)) throw std::invalid_argument(std::string(feature) + ": threshold must be >= 0");
}

double weighted_mav(std::span<const double> x, auto weight) {
  const double n = static_cast<double>(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += weight(static_cast<double>(i + 1), n) * std::abs(x[i]);
  }
  return acc / n;
}

}  // namespace

double iemg(std::span<const double> x) {
  require_length(x, 1, "iemg");
  double acc = 0.0;
  for (double v : x) acc += std::abs(v);
  return acc;
}

double mav(std::span<const double> x) { return iemg(x) / static_cast<double>(x.size()); }

double mmav1(std::span<const double> x) {
  require_length(x, 4, "mmav1");
  return weighted_mav(x, [](double n, double len) { return (n >= 0.25 * len && n <= 0.75 * len) ? 1.0 : 0.5; });
}

double mmav2(std::span<const double> x) {
  require_length(x, 4, "mmav2");
  return weighted_mav(x, [](double n, double len) {
    if (n < 0.25 * len) return 4.0 * n / len;
    if (n > 0.75 * len) return 4.0 * (len - n) / len;
    return 1.0;
  });
}

std::vector<double> mavslp(std::span<const double> x, const MavslpParams& params) {
  const auto k = params.segments;
  if (k < 2) throw std::invalid_argument("mavslp: segment count must be >= 2");
  const auto ku = static_cast<std::size_t>(k);
  if (x.size() < ku || x.size() % ku != 0) {
    throw std::invalid_argument("mavslp: window of " + std::to_string(x.size()) + " samples does not divide into " +
                                std::to_string(k) + " segments");
  }
  const std::size_t len = x.size() / ku;
  std::vector<double> seg_mav(ku);
  for (std::size_t s = 0; s < ku; ++s) seg_mav[s] = mav(x.subspan(s * len, len));
  std::vector<double> out(ku - 1);
  for (std::size_t s = 0; s + 1 < ku; ++s) out[s] = seg_mav[s + 1] - seg_mav[s];
  return out;
}

double ssi(std::span<const double> x) {
  require_length(x, 1, "ssi");
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double var(std::span<const double> x) {
  require_length(x, 2, "var");
  return ssi(x) / static_cast<double>(x.size() - 1);
}

double rms(std::span<const double> x) { return std::sqrt(ssi(x) / static_cast<double>(x.size())); }

double wl(std::span<const double> x) {
  require_length(x, 2, "wl");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) acc += std::abs(x[i + 1] - x[i]);
  return acc;
}

std::size_t zc(std::span<const double> x, double threshold) {
  require_length(x, 2, "zc");
  require_threshold(threshold, "zc");
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] * x[i + 1] < 0.0 && std::abs(x[i] - x[i + 1]) >= threshold) ++count;
  }
  return count;
}

std::size_t ssc(std::span<const double> x, double threshold) {
  require_length(x, 3, "ssc");
  require_threshold(threshold, "ssc");
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if ((x[i] - x[i - 1]) * (x[i] - x[i + 1]) >= threshold) ++count;
  }
  return count;
}

std::size_t wamp(std::span<const double> x, double threshold) {
  require_length(x, 2, "wamp");
  require_threshold(threshold, "wamp");
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (std::abs(x[i] - x[i + 1]) >= threshold) ++count;
  }
  return count;
}

std::vector<std::size_t> hemg(std::span<const double> x, const HistogramParams& params) {
  require_length(x, 1, "hemg");
  if (params.bins < 1) throw std::invalid_argument("hemg: bin count must be >= 1");
  if (!(params.range > 0.0) || !std::isfinite(params.range)) throw std::invalid_argument("hemg: range must be positive");
  const auto b = static_cast<std::size_t>(params.bins);
  const double width = 2.0 * params.range / static_cast<double>(b);
  std::vector<std::size_t> counts(b, 0);
  for (double v : x) {
    const double pos = std::floor((v + params.range) / width);
    std::size_t idx = 0;
    if (pos >= static_cast<double>(b)) {
      idx = b - 1;
    } else if (pos > 0.0) {
      idx = static_cast<std::size_t>(pos);
    }
    ++counts[idx];
  }
  return counts;
}

}  // namespace emg

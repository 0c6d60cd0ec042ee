#include "emgrobust/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace emg {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(base);
  for (auto v : path) h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
  return h;
}

std::vector<double> generate_wgn(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(mix64(seed));
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

double signal_power(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("signal_power: empty signal");
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double noise_sigma_for_snr(double clean_power, double snr_db) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite");
  if (!(clean_power > 0.0)) throw std::domain_error("SNR is undefined for a zero-power signal");
  return std::sqrt(clean_power * std::pow(10.0, -snr_db / 10.0));
}

std::vector<double> add_white_noise(std::span<const double> x, double sigma, std::uint64_t seed,
                                    std::uint64_t repetition_index) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  const auto w = generate_wgn(x.size(), derive_seed(seed, {repetition_index}));
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + sigma * w[i];
  return out;
}

std::vector<double> inject_at_snr(std::span<const double> x, const NoiseSpec& spec) {
  const double sigma = noise_sigma_for_snr(signal_power(x), spec.snr_db);
  return add_white_noise(x, sigma, spec.seed, spec.repetition_index);
}

Signal inject_at_snr(const Signal& signal, const NoiseSpec& spec) {
  return Signal(inject_at_snr(signal.view(), spec), signal.sampling_rate());
}

double measured_snr_db(std::span<const double> clean, std::span<const double> noisy) {
  if (clean.size() != noisy.size() || clean.empty()) throw std::invalid_argument("measured_snr_db: length mismatch");
  double added = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double d = noisy[i] - clean[i];
    added += d * d;
  }
  added /= static_cast<double>(clean.size());
  return 10.0 * std::log10(signal_power(clean) / added);
}

}  // namespace emg

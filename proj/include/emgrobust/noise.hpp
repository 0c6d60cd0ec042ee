#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "emgrobust/signal.hpp"

namespace emg {

struct NoiseSpec {
  double snr_db = 20.0;
  std::uint64_t seed = 0;
  std::uint64_t repetition_index = 0;
};

// Combines a base seed with a path of indices (trial, channel, level, ...)
// into an independent stream seed. Pure function of its arguments.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// n i.i.d. N(0, 1) draws; identical for identical seeds.
std::vector<double> generate_wgn(std::size_t n, std::uint64_t seed);

// Mean square amplitude (1/N) sum x_n^2.
double signal_power(std::span<const double> x);

// Noise standard deviation that puts expected noise power at
// clean_power * 10^(-snr_db / 10).
double noise_sigma_for_snr(double clean_power, double snr_db);

// x + sigma * w with w drawn from the (seed, repetition_index) stream.
std::vector<double> add_white_noise(std::span<const double> x, double sigma, std::uint64_t seed, std::uint64_t repetition_index);

// SNR-calibrated injection; sigma is derived from the realized power of x.
// Throws std::domain_error when x has zero power.
std::vector<double> inject_at_snr(std::span<const double> x, const NoiseSpec& spec);
Signal inject_at_snr(const Signal& signal, const NoiseSpec& spec);

// 10 log10(P_clean / P_added), where P_added is measured from noisy - clean.
double measured_snr_db(std::span<const double> clean, std::span<const double> noisy);

}  // namespace emg

#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Time-domain sEMG features over one window x_1..x_N. Thresholds are in the
// same amplitude units as the samples.
namespace emg {

struct ThresholdParams {
  double zc_threshold = 10.0;
  double ssc_threshold = 30.0;
  double wamp_threshold = 10.0;
};

// b equal-width bins partitioning [-range, +range]. Samples outside the range
// are counted in the nearest edge bin.
struct HistogramParams {
  int bins = 3;
  double range = 1.0;
};

struct MavslpParams {
  int segments = 4;
};

double iemg(std::span<const double> x);
double mav(std::span<const double> x);

// Piecewise weights use 1-based n, full weight on 0.25N <= n <= 0.75N.
double mmav1(std::span<const double> x);

// Continuous trapezoid weights: 4n/N rising edge, 4(N-n)/N falling edge.
double mmav2(std::span<const double> x);

// k-1 differences of consecutive sub-segment MAVs. N must divide by k.
std::vector<double> mavslp(std::span<const double> x, const MavslpParams& params = {});

double ssi(std::span<const double> x);

// Zero-mean variance estimate: sum(x^2) / (N-1), no mean subtraction.
double var(std::span<const double> x);

double rms(std::span<const double> x);
double wl(std::span<const double> x);

// Counts sign changes x_n * x_{n+1} < 0 whose jump |x_n - x_{n+1}| reaches the threshold.
std::size_t zc(std::span<const double> x, double threshold);

// Counts n in 2..N-1 with (x_n - x_{n-1}) * (x_n - x_{n+1}) >= threshold.
std::size_t ssc(std::span<const double> x, double threshold);

std::size_t wamp(std::span<const double> x, double threshold);

std::vector<std::size_t> hemg(std::span<const double> x, const HistogramParams& params);

}  // namespace emg

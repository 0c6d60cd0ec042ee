// Acceptance suite: one PASS/FAIL line per criterion, sub-checks indented below.
// Usage: acceptance [report-dir]

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "emgrobust/dataset.hpp"
#include "emgrobust/features.hpp"
#include "emgrobust/freq_features.hpp"
#include "emgrobust/noise.hpp"
#include "emgrobust/recognition.hpp"
#include "emgrobust/robustness.hpp"
#include "emgrobust/signal.hpp"
#include "emgrobust/synth.hpp"
#include "emgrobust/time_features.hpp"
#include "oracles.hpp"

using namespace emg;
namespace fs = std::filesystem;
using V = std::vector<double>;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { pass, fail, discrepancy };

struct Outcome {
  Status status = Status::pass;
  std::string summary;
  std::vector<std::string> lines;
  int failures = 0;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      status = Status::fail;
      lines.push_back("FAILED " + what);
    }
  }
  void note(const std::string& what) { lines.push_back(what); }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_root_modulus(const V& a) {
  const auto p = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) c(0, j) = -a[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) c(i, i - 1) = 1.0;
  return c.eigenvalues().cwiseAbs().maxCoeff();
}

Dataset broadband(int trials, int channels, std::uint64_t seed) {
  auto cfg = default_synth_config(1, channels, seed);
  cfg.classes[0].band_low_hz = 20.0;
  cfg.classes[0].band_high_hz = 450.0;
  cfg.trials_per_class = trials;
  return synthesize_emg(cfg);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  const double fs = 1000.0;
  const double hemg_range = 60.0;
  std::size_t compared = 0;
  for (int w = 0; w < 100; ++w) {
    const auto x = oracle::random_window(rng, 256, 20.0);
    auto rel = [&](const char* name, double got, double ref) {
      ++compared;
      if (!oracle::close_rel(got, ref, 1e-9)) o.expect(false, std::string(name) + " window " + std::to_string(w) + ": " + fmt(got, 17) + " vs " + fmt(ref, 17));
    };
    auto exact = [&](const char* name, double got, double ref) {
      ++compared;
      if (got != ref) o.expect(false, std::string(name) + " window " + std::to_string(w) + ": " + fmt(got, 17) + " vs " + fmt(ref, 17));
    };
    rel("iemg", iemg(x), oracle::iemg(x));
    rel("mav", mav(x), oracle::mav(x));
    rel("mmav1", mmav1(x), oracle::mmav1(x));
    rel("mmav2", mmav2(x), oracle::mmav2(x));
    const auto slope = mavslp(x, {4});
    const auto slope_ref = oracle::mavslp(x, 4);
    for (std::size_t k = 0; k < slope_ref.size(); ++k) rel("mavslp", slope[k], slope_ref[k]);
    rel("ssi", ssi(x), oracle::ssi(x));
    rel("var", var(x), oracle::var(x));
    rel("rms", rms(x), oracle::rms(x));
    rel("wl", wl(x), oracle::wl(x));
    for (double t : {0.0, 10.0, 30.0}) {
      exact("zc", static_cast<double>(zc(x, t)), static_cast<double>(oracle::zc(x, t)));
      exact("ssc", static_cast<double>(ssc(x, t)), static_cast<double>(oracle::ssc(x, t)));
      exact("wamp", static_cast<double>(wamp(x, t)), static_cast<double>(oracle::wamp(x, t)));
    }
    for (int b : {3, 5, 11}) {
      const auto h = hemg(x, {b, hemg_range});
      const auto hr = oracle::hemg(x, static_cast<std::size_t>(b), hemg_range);
      for (std::size_t i = 0; i < hr.size(); ++i) exact("hemg", static_cast<double>(h[i]), static_cast<double>(hr[i]));
    }
    for (int p : {1, 2, 4, 10}) {
      const auto a = ar_coefficients(x, p).coefficients;
      const auto ar = oracle::ar(x, static_cast<std::size_t>(p));
      for (std::size_t i = 0; i < ar.size(); ++i) rel("ar", a[i], ar[i]);
    }
    const auto ref = oracle::naive_spectrum(x, fs);
    const auto spec = amplitude_spectrum(x, fs);
    for (std::size_t j = 0; j < ref.amps.size(); ++j) rel("spectrum", spec.amplitudes[j], ref.amps[j]);
    const auto ref_p = oracle::squares(ref.amps);
    const auto m = spectral_moments(x, fs);
    rel("mnf", m.mnf, oracle::centroid(ref.freqs, ref_p));
    exact("mdf", m.mdf, oracle::median(ref.freqs, ref_p));
    rel("mmnf", m.mmnf, oracle::centroid(ref.freqs, ref.amps));
    exact("mmdf", m.mmdf, oracle::median(ref.freqs, ref.amps));
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 10.0, "runtime " + fmt(secs) + " s exceeds 10 s");
  o.summary = "18 features vs brute-force oracles on 100 random 256-sample windows (" + std::to_string(compared) + " values, " +
              fmt(secs, 3) + " s)";
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  int n = 0;
  auto check = [&](bool ok, const std::string& what) {
    ++n;
    o.expect(ok, what);
  };
  {
    const auto w = segment(Signal(V(1000, 1.0), 1000.0), {256.0, 64.0});
    bool starts = w.size() == 12;
    for (std::size_t i = 0; starts && i < w.size(); ++i) starts = w[i].start == 64 * i;
    check(starts && w.back().start == 704, "segment: 1000 samples -> 12 windows at 0,64,...,704");
  }
  const V x{1, -2, 3};
  check(iemg(x) == 6.0, "iemg([1,-2,3]) = 6");
  check(mav(x) == 2.0, "mav([1,-2,3]) = 2");
  check(mmav1(V{2, 2, 2, 2}) == 1.75, "mmav1([2,2,2,2]) = 1.75");
  check(mmav2(V(8, 1.0)) == 0.75, "mmav2(ones(8)) = 0.75");
  check(mavslp(V{2, -2, 5, 5}, {2}) == V{3}, "mavslp halves with MAV 2 and 5 -> [3]");
  check(ssi(x) == 14.0, "ssi([1,-2,3]) = 14");
  check(var(x) == 7.0, "var([1,-2,3]) = 7");
  check(rms(x) == std::sqrt(14.0 / 3.0) && std::abs(rms(x) - 2.160247) < 5e-7, "rms([1,-2,3]) = sqrt(14/3) ~ 2.160247");
  check(wl(x) == 8.0, "wl([1,-2,3]) = 8");
  check(zc(V{1, -1, 1, -1}, 0.5) == 3, "zc([1,-1,1,-1], 0.5) = 3");
  check(zc(V{1, -1, 1, -1}, 3.0) == 0, "zc([1,-1,1,-1], 3) = 0");
  check(ssc(V{0, 2, 0, 2, 0}, 1.0) == 3, "ssc([0,2,0,2,0], 1) = 3");
  check(wamp(V{0, 3, 0}, 2.0) == 2, "wamp([0,3,0], 2) = 2");
  check(hemg(V{-2.5, 0.1, 2.9, 0.2}, {3, 3.0}) == std::vector<std::size_t>{1, 2, 1}, "hemg(b=3, r=3) -> [1,2,1]");
  check(mnf(PowerSpectrum{{100, 200}, {1, 9}}) == 190.0, "mnf(P=[1,9] at 100,200 Hz) = 190 Hz");
  check(mdf(PowerSpectrum{{100, 200, 300}, {1, 1, 2}}) == 200.0, "mdf(P=[1,1,2]) = 200 Hz");
  check(mmnf(Spectrum{{100, 200}, {1, 3}}) == 175.0, "mmnf(A=[1,3]) = 175 Hz");
  check(mmdf(Spectrum{{100, 200, 300}, {1, 1, 2}}) == 200.0, "mmdf(A=[1,1,2]) = 200 Hz");
  check(power_spectrum(Spectrum{{100, 200}, {1, 3}}).powers == V{1, 9}, "power of A=[1,3] = [1,9]");
  check(signal_power(x) == 14.0 / 3.0, "signal_power([1,-2,3]) = 14/3");
  check(percentage_error(10.0, 9.0) == 10.0, "PE(10, 9) = 10%");
  check(percentage_error(10.0, 12.0) == 20.0, "PE(10, 12) = 20%");
  check(majority_vote(std::vector<int>{0, 0, 1, 0, 0}, 3) == std::vector<int>{0, 0, 0, 0, 0}, "MV([A,A,B,A,A], 3) = [A,A,A,A,A]");
  o.summary = std::to_string(n) + " hand-evaluated examples";
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  auto cfg = default_synth_config(1, 1, 3);
  cfg.trial_duration_ms = 100000.0;
  cfg.trials_per_class = 1;
  const auto clean = synthesize_emg(cfg).trials[0].channels[0].samples();
  o.expect(clean.size() == 100000, "clean signal length");
  for (double target : {20.0, 10.0, 0.0}) {
    double mean = 0.0, worst = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      const double got = measured_snr_db(clean, inject_at_snr(clean, NoiseSpec{target, 1234, r}));
      worst = std::max(worst, std::abs(got - target));
      mean += got / 100.0;
    }
    o.expect(worst <= 0.3, "target " + fmt(target) + " dB: worst single injection off by " + fmt(worst) + " dB");
    o.expect(std::abs(mean - target) <= 0.1, "target " + fmt(target) + " dB: mean of 100 off by " + fmt(mean - target) + " dB");
    o.note("target " + fmt(target) + " dB: mean " + fmt(mean, 6) + " dB, worst |error| " + fmt(worst, 3) + " dB");
  }
  o.summary = "SNR calibration at N = 1e5, targets {20,10,0} dB";
  return o;
}

// ---------------------------------------------------------------------------

// Shared by criteria 4-6: broadband synthetic sEMG, default grid, 30 repetitions.
struct RobustnessRun {
  RobustnessConfig cfg;
  RobustnessGrid grid;
  double seconds = 0.0;
};

const RobustnessRun& robustness_run() {
  static const RobustnessRun run = [] {
    RobustnessRun r;
    const auto t0 = Clock::now();
    const auto ds = broadband(4, 2, 404);
    r.cfg.repetitions = 30;
    r.cfg.seed = 4;
    const auto specs = parse_feature_list("rms,mnf,mmnf,mdf,mmdf");
    r.grid = run_grid(ds, specs, r.cfg);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Outcome criterion4(const fs::path& report_dir) {
  Outcome o;
  const auto& run = robustness_run();
  std::ostringstream table;
  table << "| SNR (dB) | MNF | MMNF | MDF | MMDF |\n|---|---|---|---|---|\n";
  std::vector<std::string> violations;
  for (double snr : run.cfg.snr_grid) {
    const double mnf_pe = run.grid.pooled_mean("mnf", snr);
    const double mmnf_pe = run.grid.pooled_mean("mmnf", snr);
    const double mdf_pe = run.grid.pooled_mean("mdf", snr);
    const double mmdf_pe = run.grid.pooled_mean("mmdf", snr);
    table << "| " << fmt(snr) << " | " << fmt(mnf_pe) << " | " << fmt(mmnf_pe) << " | " << fmt(mdf_pe) << " | " << fmt(mmdf_pe) << " |\n";
    o.note("SNR " + fmt(snr) + " dB: PE% MNF " + fmt(mnf_pe) + "  MMNF " + fmt(mmnf_pe) + "  MDF " + fmt(mdf_pe) + "  MMDF " + fmt(mmdf_pe));
    if (snr <= 10.0) {
      if (!(mmnf_pe <= mnf_pe)) violations.push_back("MMNF > MNF at " + fmt(snr) + " dB (" + fmt(mmnf_pe) + " vs " + fmt(mnf_pe) + ")");
      if (!(mmdf_pe <= mdf_pe)) violations.push_back("MMDF > MDF at " + fmt(snr) + " dB (" + fmt(mmdf_pe) + " vs " + fmt(mdf_pe) + ")");
    }
  }
  const auto n = run.grid.pooled_count("mmnf", 0.0);
  o.note("PE values per feature and level: " + std::to_string(n) + " (windows x 30 repetitions)");
  if (violations.empty()) {
    o.summary = "MMNF <= MNF and MMDF <= MDF at every SNR <= 10 dB";
    return o;
  }
  const auto path = report_dir / "criterion4_discrepancy.md";
  std::ofstream rep(path);
  rep << "# Modified vs traditional spectral moments: ordering discrepancy\n\n"
      << "Data: synthetic sEMG, one class, band 20-450 Hz, 4 trials x 2 channels x 2048 ms at 1 kHz;\n"
      << "256 ms windows, 64 ms slide; 30 noise repetitions per window and level; seed 4.\n\n"
      << "Mean percentage error (%):\n\n"
      << table.str() << "\nOrdering violations at SNR <= 10 dB:\n\n";
  for (const auto& v : violations) rep << "- " << v << "\n";
  rep << "\nThe amplitude-weighted mean frequency is the better-behaved of the two moments only when the\n"
      << "signal band carries most of the amplitude mass. On a flat 20-450 Hz band, white noise adds\n"
      << "amplitude everywhere including the empty 450-500 Hz region and the low bins; amplitude\n"
      << "weighting (square root of power) gives those noise-only bins relatively more weight than power\n"
      << "weighting does, which offsets the lower variance of the amplitude estimate. The ordering is\n"
      << "therefore data dependent, as the criterion anticipates.\n";
  for (const auto& v : violations) o.note("violation: " + v);
  o.note("discrepancy report: " + path.string());
  o.status = Status::discrepancy;
  o.summary = "ordering fails at " + std::to_string(violations.size()) + " point(s); discrepancy report written";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto& run = robustness_run();
  const double pe = run.grid.pooled_mean("mmnf", 20.0);
  o.expect(pe < 5.0, "MMNF mean PE at 20 dB is " + fmt(pe) + "%");
  o.summary = "MMNF mean PE at 20 dB = " + fmt(pe) + "% (< 5%)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto& run = robustness_run();
  for (const char* f : {"rms", "mnf", "mmnf"}) {
    int violations = 0;
    std::string series;
    for (std::size_t i = 0; i < run.cfg.snr_grid.size(); ++i) {
      const double pe = run.grid.pooled_mean(f, run.cfg.snr_grid[i]);
      series += (i ? " " : "") + fmt(pe);
      if (i > 0 && pe < run.grid.pooled_mean(f, run.cfg.snr_grid[i - 1])) ++violations;
    }
    o.expect(violations <= 1, std::string(f) + ": " + std::to_string(violations) + " adjacent-pair violations");
    o.note(std::string(f) + " PE% along 20..0 dB: " + series + " (" + std::to_string(violations) + " violations)");
  }
  o.summary = "RMS, MNF, MMNF mean PE non-decreasing as SNR falls (<= 1 violation each)";
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto sets = parse_feature_sets("hudgins,oskoei,robust");
  const auto levels = parse_noise_levels("clean,20,15,10");
  std::vector<int> clean_wins(sets.size(), 0);
  double worst_robust = 100.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ds = synthesize_emg(default_synth_config(4, 2, seed));
    RecognitionConfig cfg;
    cfg.seed = seed;
    const auto eval = evaluate_feature_sets(ds, sets, levels, cfg);
    std::size_t populated = 0;
    std::string row;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      bool clean_best = true;
      row += sets[s].name + "[";
      for (std::size_t l = 0; l < levels.size(); ++l) {
        const auto& r = eval.reports[s][l];
        if (!r.decisions.empty() && std::isfinite(r.classification_rate)) ++populated;
        if (l > 0 && r.classification_rate > eval.reports[s][0].classification_rate) clean_best = false;
        row += (l ? " " : "") + fmt(r.classification_rate);
      }
      row += "] ";
      clean_wins[s] += clean_best;
    }
    o.expect(populated == 12, "seed " + std::to_string(seed) + ": " + std::to_string(populated) + " of 12 cells populated");
    const double robust_clean = eval.reports[2][0].classification_rate;
    worst_robust = std::min(worst_robust, robust_clean);
    o.expect(robust_clean >= 95.0, "seed " + std::to_string(seed) + ": robust clean CR " + fmt(robust_clean) + "%");
    o.note("seed " + std::to_string(seed) + " CR% (clean 20 15 10 dB): " + row);
  }
  for (std::size_t s = 0; s < sets.size(); ++s) {
    o.expect(clean_wins[s] >= 3, sets[s].name + ": clean >= noisy in only " + std::to_string(clean_wins[s]) + " of 5 seeds");
    o.note(sets[s].name + ": clean >= every noisy level in " + std::to_string(clean_wins[s]) + " of 5 seeds");
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 120.0, "runtime " + fmt(secs) + " s exceeds 2 min");
  o.summary = "4-class 2-channel pipeline: robust clean CR >= 95% (worst " + fmt(worst_robust) + "%), 3x4 table, " + fmt(secs, 3) + " s";
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const std::vector<V> models{{-0.9}, {0.5}, {-0.6, 0.2}, {-1.2, 0.5}, {0.3, -0.2, 0.1}, {-0.4, 0.1, 0.2, -0.1}, {-1.5, 1.1, -0.4, 0.1}};
  std::uint64_t seed = 800;
  double worst = 0.0;
  for (const auto& a : models) {
    if (max_root_modulus(a) >= 1.0) {
      o.expect(false, "test model is not stationary");
      continue;
    }
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = oracle::simulate_ar(a, 8192, seed++);
      const auto m = ar_coefficients(x, static_cast<int>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(m.coefficients[i] - a[i]));
      o.expect(max_root_modulus(m.coefficients) < 1.0, "estimate not stationary");
    }
  }
  o.expect(worst <= 0.1, "worst coefficient error " + fmt(worst));
  // Stationarity of estimates on arbitrary data, including near-unit-root and sinusoidal windows.
  std::mt19937_64 rng(81);
  std::size_t fits = 0;
  for (int i = 0; i < 200; ++i) {
    auto x = oracle::random_window(rng, 256, 5.0);
    if (i % 3 == 1) {
      for (std::size_t t = 1; t < x.size(); ++t) x[t] += 0.999 * x[t - 1];
    } else if (i % 3 == 2) {
      for (std::size_t t = 0; t < x.size(); ++t) x[t] = 0.01 * x[t] + std::sin(0.3 * static_cast<double>(t));
    }
    for (int p = 1; p <= 10; ++p) {
      ++fits;
      o.expect(max_root_modulus(ar_coefficients(x, p).coefficients) < 1.0, "estimate of window " + std::to_string(i) + " order " + std::to_string(p) + " not stationary");
    }
  }
  o.note("round trip over " + std::to_string(models.size()) + " models x 5 simulations: worst |a_i error| " + fmt(worst));
  o.note(std::to_string(fits) + " further fits checked for stationarity");
  o.summary = "AR round trip (p <= 4, N = 8192) within 0.1, all estimates stationary";
  return o;
}

// ---------------------------------------------------------------------------

void properties_time(Outcome& o) {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> cd(-5.0, 5.0);
  bool homog = true, ident = true, mono = true, hist = true;
  for (int i = 0; i < 100; ++i) {
    const auto x = oracle::random_window(rng, 256, 15.0);
    double c = cd(rng);
    if (std::abs(c) < 0.05) c = 2.0;
    V y(x);
    for (auto& v : y) v *= c;
    const double a = std::abs(c);
    homog &= oracle::close_rel(iemg(y), a * iemg(x), 1e-12) && oracle::close_rel(mav(y), a * mav(x), 1e-12) &&
             oracle::close_rel(mmav1(y), a * mmav1(x), 1e-12) && oracle::close_rel(mmav2(y), a * mmav2(x), 1e-12) &&
             oracle::close_rel(rms(y), a * rms(x), 1e-12) && oracle::close_rel(wl(y), a * wl(x), 1e-12) &&
             oracle::close_rel(ssi(y), c * c * ssi(x), 1e-12) && oracle::close_rel(var(y), c * c * var(x), 1e-12);
    if (c > 0) homog &= zc(y, 0) == zc(x, 0) && ssc(y, 0) == ssc(x, 0) && wamp(y, 0) == wamp(x, 0);
    const double n = static_cast<double>(x.size());
    ident &= mav(x) == iemg(x) / n && var(x) == ssi(x) / (n - 1) && rms(x) == std::sqrt(ssi(x) / n);
    std::size_t pz = SIZE_MAX, ps = SIZE_MAX, pw = SIZE_MAX;
    for (double t = 0; t <= 60; t += 5) {
      mono &= zc(x, t) <= pz && ssc(x, t) <= ps && wamp(x, t) <= pw;
      pz = zc(x, t), ps = ssc(x, t), pw = wamp(x, t);
    }
    const auto h = hemg(x, {5, 40.0});
    std::size_t total = 0;
    for (auto v : h) total += v;
    hist &= total == x.size() && hemg(V(x.rbegin(), x.rend()), {5, 40.0}) == h;
  }
  o.expect(homog, "amplitude-scaling homogeneity");
  o.expect(ident, "definitional identities");
  o.expect(mono, "threshold counters non-increasing in threshold");
  o.expect(hist, "hemg sums to N and is reversal invariant");
  const V z(256, 0.0);
  const ThresholdParams t;
  const bool zero = iemg(z) == 0 && mav(z) == 0 && mmav1(z) == 0 && mmav2(z) == 0 && ssi(z) == 0 && var(z) == 0 && rms(z) == 0 &&
                    wl(z) == 0 && zc(z, t.zc_threshold) == 0 && ssc(z, t.ssc_threshold) == 0 && wamp(z, t.wamp_threshold) == 0 &&
                    mavslp(z, {4}) == V(3, 0.0) && hemg(z, {3, 1.0}) == std::vector<std::size_t>{0, 256, 0};
  o.expect(zero, "zero window gives zero features (hemg [0,N,0])");
  o.note("time-domain: homogeneity, identities, monotonicity, hemg, zero window on 100 windows");
}

void properties_freq(Outcome& o) {
  std::mt19937_64 rng(92);
  bool parseval = true, squares = true, scale = true, span = true, median_rule = true;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 64 + static_cast<std::size_t>(rng() % 400);
    const auto x = oracle::random_window(rng, n, 10.0);
    const auto s = amplitude_spectrum(x, 1000.0);
    const auto p = power_spectrum(s);
    double sp = 0.0;
    for (double v : p.powers) sp += v;
    parseval &= oracle::close_rel(sp, oracle::ssi(x), 1e-6);
    for (std::size_t j = 0; j < s.bins(); ++j) squares &= p.powers[j] == s.amplitudes[j] * s.amplitudes[j];
    const auto m = spectral_moments(x, 1000.0);
    V y(x);
    for (auto& v : y) v *= 8.0;
    const auto my = spectral_moments(y, 1000.0);
    scale &= m.mnf == my.mnf && m.mdf == my.mdf && m.mmnf == my.mmnf && m.mmdf == my.mmdf;
    for (double f : {m.mnf, m.mdf, m.mmnf, m.mmdf}) span &= f >= s.freqs.front() && f <= s.freqs.back();
    for (const auto& [f, w] : {std::pair{m.mdf, p.powers}, std::pair{m.mmdf, s.amplitudes}}) {
      double total = 0.0, below = 0.0;
      for (double v : w) total += v;
      std::size_t k = 0;
      while (s.freqs[k] != f) ++k;
      for (std::size_t j = 0; j < k; ++j) below += w[j];
      median_rule &= below < 0.5 * total && below + w[k] >= 0.5 * total;
    }
  }
  o.expect(parseval, "Parseval within 1e-6 relative");
  o.expect(squares, "P_j = A_j^2 exactly");
  o.expect(scale, "moment scale invariance");
  o.expect(span, "moments inside the frequency span");
  o.expect(median_rule, "median bin property");
  o.note("frequency-domain: Parseval, P = A^2, scale invariance, span, median bin on 100 windows");
}

void properties_noise(Outcome& o) {
  std::mt19937_64 rng(93);
  const auto x = oracle::random_window(rng, 1000, 3.0);
  const NoiseSpec spec{5.0, 77, 3};
  const auto a = inject_at_snr(x, spec);
  const double sigma = noise_sigma_for_snr(signal_power(x), 5.0);
  const auto w = generate_wgn(x.size(), derive_seed(77, {3}));
  bool additive = true;
  for (std::size_t i = 0; i < x.size(); ++i) additive &= a[i] == x[i] + sigma * w[i];
  o.expect(a == inject_at_snr(x, spec), "noise determinism");
  o.expect(additive, "noise additivity");
  o.note("noise: determinism and additivity (calibration under criterion 3)");
}

void properties_robustness(Outcome& o) {
  const auto ds = broadband(2, 1, 94);
  RobustnessConfig cfg;
  cfg.repetitions = 10;
  cfg.seed = 94;
  const auto panel = default_robustness_panel();
  const auto g1 = run_grid(ds, panel, cfg);
  const auto g2 = run_grid(ds, panel, cfg);
  std::ostringstream s1, s2;
  write_grid_csv(s1, g1);
  write_grid_csv(s2, g2);
  o.expect(s1.str() == s2.str(), "robustness grid bit-exact determinism");
  bool nonneg = true;
  for (const auto& c : g1.cells) nonneg &= c.mean_pe >= 0.0;
  o.expect(nonneg, "PE non-negative");
  for (const auto& f : panel) {
    int v = 0;
    for (std::size_t i = 1; i < cfg.snr_grid.size(); ++i) v += g1.pooled_mean(f.name(), cfg.snr_grid[i]) < g1.pooled_mean(f.name(), cfg.snr_grid[i - 1]);
    o.expect(v <= 1, f.name() + " trend has " + std::to_string(v) + " violations");
  }
  auto dry = cfg;
  dry.dry_run = true;
  dry.repetitions = 1;
  bool zero = true;
  for (const auto& c : run_grid(ds, panel, dry).cells) zero &= c.mean_pe == 0.0;
  o.expect(zero, "dry run PE = 0");
  // Fixed absolute noise: the weaker copy of each window errs more.
  const auto windows = segment(ds.trials[0].channels[0], {});
  for (const char* name : {"rms", "mnf", "mmnf", "mdf", "mmdf"}) {
    const auto f = parse_feature(name);
    double strong = 0.0, weak = 0.0;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
      V small(windows[wi].samples);
      for (auto& v : small) v *= 0.25;
      for (std::uint64_t r = 0; r < 10; ++r) {
        const auto seed = derive_seed(95, {wi});
        strong += percentage_error(extract_scalar(f, windows[wi].samples, 1000.0), extract_scalar(f, add_white_noise(windows[wi].samples, 15.0, seed, r), 1000.0));
        weak += percentage_error(extract_scalar(f, small, 1000.0), extract_scalar(f, add_white_noise(small, 15.0, seed, r), 1000.0));
      }
    }
    o.expect(weak > strong, std::string(name) + ": weak signal PE not above strong at fixed noise power");
  }
  o.note("robustness: determinism, non-negativity, panel trends, dry run, weak-vs-strong at fixed noise power");
}

void properties_recognition(Outcome& o) {
  // Affine invariance with no ridge.
  std::mt19937_64 rng(96);
  std::normal_distribution<double> d(0.0, 1.0);
  auto blobs = [&](std::size_t per) {
    LabeledWindowSet s;
    s.class_names = {"a", "b", "c"};
    s.features.resize(static_cast<Eigen::Index>(3 * per), 3);
    const double centers[3][3] = {{0, 0, 0}, {2, 1, 0}, {1, 3, -1}};
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < per; ++i) {
        const auto r = static_cast<Eigen::Index>(c * static_cast<int>(per) + static_cast<int>(i));
        for (int j = 0; j < 3; ++j) s.features(r, j) = centers[c][j] + d(rng);
        s.labels.push_back(c);
        s.trial_ids.push_back(0);
        s.window_start_ms.push_back(0);
      }
    }
    return s;
  };
  const auto train = blobs(40);
  const auto test = blobs(40);
  Eigen::Matrix3d a;
  a << 2, 0.5, -1, 0.3, -3, 0.2, 1, 1, 4;
  const Eigen::Vector3d b(10, -5, 3);
  auto map = [&](LabeledWindowSet s) {
    for (Eigen::Index i = 0; i < s.features.rows(); ++i) s.features.row(i) = (a * s.features.row(i).transpose() + b).transpose();
    return s;
  };
  const auto m1 = lda_train(train, {0.0});
  const auto m2 = lda_train(map(train), {0.0});
  const auto mapped = map(test);
  bool affine = true;
  for (Eigen::Index i = 0; i < test.features.rows(); ++i) {
    const Eigen::VectorXd u = test.features.row(i);
    const Eigen::VectorXd v = mapped.features.row(i);
    affine &= lda_predict(m1, std::span<const double>(u.data(), 3)) == lda_predict(m2, std::span<const double>(v.data(), 3));
  }
  o.expect(affine, "LDA prediction invariant under an affine feature map (ridge 0)");

  bool mv = true;
  for (int it = 0; it < 200; ++it) {
    std::vector<int> dec(1 + rng() % 30);
    for (auto& v : dec) v = static_cast<int>(rng() % 4);
    const int w = 1 + 2 * static_cast<int>(rng() % 4);
    const auto out = majority_vote(dec, w);
    for (std::size_t i = 0; i < dec.size(); ++i) {
      const auto lo = i >= static_cast<std::size_t>(w / 2) ? i - static_cast<std::size_t>(w / 2) : 0;
      const auto hi = std::min(dec.size() - 1, i + static_cast<std::size_t>(w / 2));
      bool present = false;
      for (auto j = lo; j <= hi; ++j) present |= dec[j] == out[i];
      mv &= present;
    }
  }
  o.expect(mv, "majority vote never introduces a label absent from its window");

  auto ds = synthesize_emg([] {
    auto c = default_synth_config(3, 2, 97);
    c.trials_per_class = 3;
    c.trial_duration_ms = 1024.0;
    return c;
  }());
  RecognitionConfig cfg;
  cfg.seed = 97;
  const auto sets = parse_feature_sets("hudgins,robust");
  const auto levels = parse_noise_levels("clean,10");
  const auto e1 = evaluate_feature_sets(ds, sets, levels, cfg);
  const auto e2 = evaluate_feature_sets(ds, sets, levels, cfg);
  bool det = true, conf = true;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto& r = e1.reports[s][l];
      det &= r.classification_rate == e2.reports[s][l].classification_rate && r.confusion == e2.reports[s][l].confusion;
      std::size_t diag = 0, total = 0;
      std::vector<std::size_t> per_class(r.confusion.size(), 0);
      for (const auto& dcs : r.decisions) ++per_class[static_cast<std::size_t>(dcs.true_label)];
      for (std::size_t i = 0; i < r.confusion.size(); ++i) {
        std::size_t row = 0;
        for (auto v : r.confusion[i]) row += v;
        conf &= row == per_class[i];
        diag += r.confusion[i][i];
        total += row;
      }
      conf &= r.classification_rate == 100.0 * static_cast<double>(diag) / static_cast<double>(total);
    }
  }
  o.expect(det, "recognition pipeline determinism");
  o.expect(conf, "confusion accounting (diag/total = CR/100, rows = class window counts)");

  bool hygiene = true;
  for (std::size_t held = 0; held < ds.trials.size(); held += 4) {
    const auto before = train_fold(ds, sets[1], cfg, held);
    auto mutated = ds;
    for (auto& c : mutated.trials[held].channels) {
      auto v = c.samples();
      for (auto& s : v) s = 40.0 * s - 7.0;
      c = Signal(v, c.sampling_rate());
    }
    const auto after = train_fold(mutated, sets[1], cfg, held);
    hygiene &= before.model.means == after.model.means && before.model.covariance == after.model.covariance &&
               before.model.weights == after.model.weights && before.model.biases == after.model.biases && before.features == after.features;
  }
  o.expect(hygiene, "train/test hygiene mutation test");
  o.note("recognition: affine invariance, MV labels, determinism, confusion accounting, hygiene mutation");
}

void properties_data(Outcome& o) {
  auto cfg = default_synth_config(4, 2, 98);
  const auto ds = synthesize_emg(cfg);
  const auto tmp = fs::temp_directory_path() / ("emgrobust_accept_" + std::to_string(std::random_device{}()));
  bool round = true;
  try {
    const auto back = load_dataset(save_dataset(ds, tmp));
    for (std::size_t i = 0; i < ds.trials.size(); ++i) {
      for (std::size_t c = 0; c < ds.trials[i].channels.size(); ++c) round &= back.trials[i].channels[c].samples() == ds.trials[i].channels[c].samples();
    }
  } catch (const std::exception& e) {
    round = false;
    o.note(std::string("round trip error: ") + e.what());
  }
  std::error_code ec;
  fs::remove_all(tmp, ec);
  o.expect(round, "save/load round trip bit exact");
  double worst = 0.0;
  for (const auto& t : ds.trials) {
    const auto k = static_cast<std::size_t>(ds.class_index(t.label));
    for (std::size_t c = 0; c < t.channels.size(); ++c) {
      const double scale = cfg.classes[k].amplitude * cfg.gain(k, c);
      for (const auto& w : segment(t.channels[c], {})) worst = std::max(worst, std::abs(rms(w.samples) - scale) / scale);
    }
  }
  o.expect(worst < 0.3, "synthetic window RMS deviates " + fmt(100 * worst) + "% from the class scale");
  o.note("data: round trip, stationarity (worst window RMS deviation " + fmt(100 * worst, 3) + "%)");
}

Outcome criterion9() {
  Outcome o;
  properties_time(o);
  properties_freq(o);
  properties_noise(o);
  properties_robustness(o);
  properties_recognition(o);
  properties_data(o);
  o.summary = "invariant and property suites";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path report_dir = argc > 1 ? fs::path(argv[1]) : fs::current_path();
  struct Entry {
    int id;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> entries{{1, criterion1},
                                   {2, criterion2},
                                   {3, criterion3},
                                   {4, [&] { return criterion4(report_dir); }},
                                   {5, criterion5},
                                   {6, criterion6},
                                   {7, criterion7},
                                   {8, criterion8},
                                   {9, criterion9}};
  int failed = 0;
  for (const auto& e : entries) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o.status = Status::fail;
      o.summary = std::string("exception: ") + ex.what();
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "PASS-WITH-DISCREPANCY";
    std::cout << "[criterion " << e.id << "] " << tag << "  " << o.summary << "  (" << fmt(seconds_since(t0), 3) << " s)\n";
    for (const auto& l : o.lines) std::cout << "    " << l << "\n";
    failed += o.status == Status::fail;
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "acceptance: all criteria met\n" : "acceptance: " + std::to_string(failed) + " criterion/criteria failed\n");
  return failed == 0 ? 0 : 1;
}

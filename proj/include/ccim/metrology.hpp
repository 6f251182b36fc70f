#pragma once

// Measurement harnesses: transfer sweep with INL, uniform-input RMS error,
// Monte Carlo RMS versus capacitor mismatch, zero-crossing INL statistics and
// ADC linearity aggregation.

#include <cstdint>
#include <optional>
#include <vector>

#include "ccim/cmacro.hpp"

namespace ccim::metrology {

/// +FS of one accumulated output: 16 products of 127 x 127.
inline constexpr std::int64_t kFullScale = 258064;

struct SweepOptions {
  int unit = 0;
  int repeats = 1;             // conversions averaged per point
  std::uint64_t noise_seed = 0;
};

struct SweepPoint {
  int x = 0;
  double mean_code = 0.0;
  int ideal_code = 0;          // exact-integer oracle
  double true_value = 0.0;     // full-precision result in LSB units (-2032 x / 2048)
  double analog_value = 0.0;   // digital result + ADC-referred analog input, noise-free
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<double> inl;             // mean_code vs least-squares line
  std::vector<double> inl_endpoint;    // mean_code vs endpoint line
  std::vector<double> error_vs_ideal;  // mean_code - true_value
  std::vector<double> analog_inl;      // analog_value vs least-squares line
  double gain = 0.0;                   // least-squares slope, codes per input step
  double offset = 0.0;
  double max_abs_inl = 0.0;
  double max_abs_inl_endpoint = 0.0;
  double max_abs_error_vs_ideal = 0.0;
  double max_abs_analog_inl = 0.0;
};

/// Inputs (x, -x) on all eight elements, weights (-127, -127), x = -127..127;
/// records the real output code of one unit.
SweepResult transfer_sweep(const Macro& macro, const SweepOptions& opts = {});

struct RmsReport {
  double rms_pct_fs = 0.0;
  double rms_pct_range = 0.0;
  double rms_lsb = 0.0;
  std::int64_t trials = 0;
  std::int64_t samples = 0;            // two outputs per trial
  std::int64_t sum_sq_error = 0;       // product units squared, exact
  std::int64_t max_abs_error = 0;
  std::uint64_t seed = 0;
};

/// Each trial draws an input and a weight vector uniformly over all SMF bit
/// patterns and runs one complex MAC on unit trial % 8.
RmsReport rms_error(const Macro& macro, std::int64_t trials, std::uint64_t seed);
RmsReport rms_error(const MacroConfig& cfg, std::int64_t trials, std::uint64_t seed);

struct Distribution {
  double median = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
  double stderr_median = 0.0;
};

/// Percentiles by linear interpolation between order statistics.
Distribution summarize(std::vector<double> values);

struct MismatchPoint {
  double sigma_u = 0.0;
  Distribution rms;                 // rms_pct_fs across seeds
  std::vector<double> per_seed;
};

struct MismatchCurve {
  std::vector<MismatchPoint> points;
  int seeds_per_point = 0;
  std::int64_t trials_per_seed = 0;
  std::uint64_t seed = 0;
};

/// Seed s uses the same mismatch draw and trial stream at every sigma, so the
/// curve compares like with like. sigma_u applies to the array and the CDAC
/// unless the base config pins cdac_sigma_u.
MismatchCurve mismatch_sweep(const MacroConfig& base, const std::vector<double>& sigma_list,
                             int seeds_per_point, std::int64_t trials_per_seed, std::uint64_t seed);

/// Medians non-decreasing within `k` combined standard errors.
bool medians_non_decreasing(const MismatchCurve& curve, double k = 2.0);

struct ZeroCrossingEntry {
  std::optional<std::uint64_t> mismatch_seed;
  std::optional<int> analog_argmax;  // unset when the analog transfer is linear
  int code_argmax = 0;
  double max_abs_analog_inl = 0.0;
  double max_abs_inl = 0.0;
};

struct ZeroCrossingReport {
  int window = 4;
  std::vector<ZeroCrossingEntry> entries;
  int analog_defined = 0;
  int analog_near_zero = 0;
  int code_near_zero = 0;
  double analog_fraction = 0.0;  // of entries with a defined location
  double code_fraction = 0.0;
};

/// Runs transfer sweeps and reports where the largest |INL| sits. With an ideal
/// base config a single sweep is run; otherwise `seeds` mismatch draws.
ZeroCrossingReport zero_crossing_inl(const MacroConfig& base, int seeds, std::uint64_t seed,
                                     const SweepOptions& opts = {}, int window = 4);

struct AdcCharacterization {
  double sigma_u = 0.0;
  int lsb_units = 16;
  std::vector<double> dnl_rms;   // per seed
  std::vector<double> dnl_max;
  std::vector<double> inl_max;
  Distribution dnl_rms_dist;
  Distribution dnl_max_dist;
  Distribution inl_max_dist;
  /// Largest across-seed standard deviation of any single code's DNL.
  double worst_code_dnl_sigma = 0.0;
  int non_monotonic = 0;
};

AdcCharacterization adc_characterization(double sigma_u, int lsb_units, int seeds, std::uint64_t seed,
                                         const adc::AdcConfig& cfg = {});

}  // namespace ccim::metrology

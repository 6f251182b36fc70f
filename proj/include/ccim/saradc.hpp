#pragma once

// 7-bit SAR ADC behavioral model.
//
// The converter samples the fixed code 0x40 on its MSB capacitor, resolves the
// polarity of the summing node first, then inverts the conversion polarity so
// bits 5..0 successively approximate |v| on the same capacitors. The output is
// offset_code +/- magnitude, which keeps the transfer odd-symmetric for any
// capacitor mismatch. Magnitude decisions carry a half-LSB shift so an ideal
// instance rounds half away from zero.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace ccim::adc {

inline constexpr int kBits = 7;
inline constexpr int kCodes = 1 << kBits;
inline constexpr int kMagnitudeBits = kBits - 1;
inline constexpr int kMaxMagnitude = (1 << kMagnitudeBits) - 1;

struct CdacInstance {
  /// Effective bit weights in LSB units; nominal w[b] = 2^b.
  std::array<double, kBits> w{1, 2, 4, 8, 16, 32, 64};
  std::uint64_t seed = 0;
};

CdacInstance ideal_cdac();
/// Bit b is built from lsb_units * 2^b unit capacitors of relative rms `sigma_u`.
CdacInstance sample_cdac(double sigma_u, int lsb_units, std::uint64_t seed);

struct AdcConfig {
  int offset_code = 64;            // the sampled 0x40
  double comparator_offset = 0.0;  // LSB, adds to the input
  double comparator_noise_std = 0.0;
  /// Offset in the magnitude search that does not follow the polarity inversion.
  double polarity_offset = 0.0;
};

/// Throws std::invalid_argument for offset_code outside [0,127] or negative noise.
void validate(const AdcConfig& cfg);

/// Input as seen by the magnitude search, signed by the resolved polarity. Noise-free.
double referred_input(const AdcConfig& cfg, double v);

/// Noise draws come from `noise`; it may be null only when comparator_noise_std is 0.
int convert(const CdacInstance& cdac, const AdcConfig& cfg, double v, std::mt19937_64* noise = nullptr);

/// Closed-form ideal transfer: offset + sign(v) * min(63, round_half_away(|v|)).
int ideal_code(double v, int offset_code = 64);

struct Transitions {
  /// level[k-1] is the input where the code steps from k-1 to k, k = 1..127.
  /// Steps that cannot occur are +/-infinity.
  std::array<double, kCodes - 1> level{};
  /// True when every magnitude code is reachable (no zero-width codes).
  bool monotonic = true;
  int missing_codes = 0;
};

/// Throws std::invalid_argument if comparator noise is enabled.
Transitions transition_levels(const CdacInstance& cdac, const AdcConfig& cfg);

struct Linearity {
  std::vector<int> codes;   // codes with a finite width
  std::vector<double> dnl;  // per code in `codes`
  std::vector<double> inl;  // per finite transition, endpoint referenced
  double dnl_rms = 0.0;
  double dnl_max = 0.0;     // max |DNL|
  double inl_max = 0.0;     // max |INL|
};

Linearity dnl_inl(const CdacInstance& cdac, const AdcConfig& cfg);
Linearity dnl_inl(const Transitions& t);

}  // namespace ccim::adc

#pragma once

// Analog path: one 2D binary-weighted capacitor array per lane. Cell (i, j)
// has nominal weight 2^(i+j) product units; the 16 lanes share a summing node
// and the result is expressed in ADC LSB units (1 LSB = 2048 product units).

#include <array>
#include <cstdint>
#include <span>

#include "ccim/numfmt.hpp"

namespace ccim::acim {

enum class GainErrorMode { nominal_total, actual_total };
enum class Composition { flat, split_dac };

struct AnalogParams {
  double vrefsr = 0.350;        // volts
  double vrefad = 0.700;        // volts
  double unit_cap = 48e-18;     // farads
  double sigma_u = 0.0296;      // relative rms mismatch of one unit capacitor
  GainErrorMode gain_error_mode = GainErrorMode::actual_total;
  Composition composition = Composition::flat;
  /// Split-DAC only: cells with exponent below this form the attenuated section.
  int split_bridge_exponent = 6;
  /// Relative gain difference between the + and - reference polarities.
  /// Positive-sign lanes see (1 + a/2), negative-sign lanes (1 - a/2).
  double polarity_gain_asymmetry = 0.0;
};

/// Throws std::invalid_argument on negative sigma, non-positive references or
/// a bridge exponent outside [0, 12].
void validate(const AnalogParams& params);

/// Unit capacitors behind cell exponent `e` under the chosen composition.
double unit_count(const AnalogParams& params, const BitPartition& part, int exponent);
/// Total unit capacitors in one lane's analog array.
double lane_unit_count(const AnalogParams& params, const BitPartition& part);

struct CapArrayInstance {
  std::uint64_t seed = 0;
  std::uint64_t acim_cells = 0;
  double polarity_gain_asymmetry = 0.0;
  /// Relative error of each cell, per lane. Cells outside acim_cells are zero.
  std::array<std::array<double, kMagBits * kMagBits>, kLanes> eps{};
  /// C_tot_nominal / C_tot_actual, or 1 in nominal-total mode.
  double gain = 1.0;
  /// Effective weight of each cell in LSB units, gain included.
  std::array<std::array<double, kMagBits * kMagBits>, kLanes> weight_lsb{};
  bool ideal = true;
};

CapArrayInstance sample_instance(const AnalogParams& params, const BitPartition& part,
                                 std::uint64_t seed);
CapArrayInstance ideal_instance(const BitPartition& part);

/// Summing-node value in ADC LSB units. Lane signs select the reference polarity.
double evaluate(const CapArrayInstance& inst, std::span<const ProductTerm> terms);

/// Documentation-only conversion of LSB units to volts at the ADC input.
inline double to_volts(double v_lsb, const AnalogParams& params) { return v_lsb * params.vrefad / 128.0; }

}  // namespace ccim::acim

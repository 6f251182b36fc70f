#include "ccim/acim2d.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ccim::acim {

namespace {

bool in_attenuated_section(const AnalogParams& params, int exponent) {
  return params.composition == Composition::split_dac && exponent < params.split_bridge_exponent;
}

void finish(CapArrayInstance& inst, GainErrorMode mode) {
  double nominal = 0.0;
  double actual = 0.0;
  for (int p = 0; p < kLanes; ++p) {
    for (std::uint64_t m = inst.acim_cells; m != 0; m &= m - 1) {
      const int c = std::countr_zero(m);
      const double w = std::ldexp(1.0, cell_exponent(c));
      nominal += w;
      actual += w * (1.0 + inst.eps[p][c]);
    }
  }
  inst.gain = (mode == GainErrorMode::actual_total && actual > 0.0) ? nominal / actual : 1.0;
  for (int p = 0; p < kLanes; ++p) {
    for (std::uint64_t m = inst.acim_cells; m != 0; m &= m - 1) {
      const int c = std::countr_zero(m);
      inst.weight_lsb[p][c] = std::ldexp(1.0, cell_exponent(c) - 11) * (1.0 + inst.eps[p][c]) * inst.gain;
    }
  }
}

}  // namespace

void validate(const AnalogParams& params) {
  if (!(params.sigma_u >= 0.0)) throw std::invalid_argument("analog: sigma_u must be >= 0");
  if (!(params.vrefsr > 0.0) || !(params.vrefad > 0.0)) {
    throw std::invalid_argument("analog: reference voltages must be positive");
  }
  if (!(params.unit_cap > 0.0)) throw std::invalid_argument("analog: unit_cap must be positive");
  if (params.split_bridge_exponent < 0 || params.split_bridge_exponent > 12) {
    throw std::invalid_argument("analog: split_bridge_exponent must be in [0, 12]");
  }
  if (!(std::abs(params.polarity_gain_asymmetry) < 2.0)) {
    throw std::invalid_argument("analog: polarity_gain_asymmetry must be in (-2, 2)");
  }
}

double unit_count(const AnalogParams& params, const BitPartition& part, int exponent) {
  const int m = part.min_acim_exponent();
  if (m < 0) return 0.0;
  if (params.composition == Composition::flat || in_attenuated_section(params, exponent)) {
    return std::ldexp(1.0, exponent - m);
  }
  // Upper section of a split array restarts at one unit at the bridge exponent.
  return std::ldexp(1.0, exponent - std::max(m, params.split_bridge_exponent));
}

double lane_unit_count(const AnalogParams& params, const BitPartition& part) {
  double total = 0.0;
  for (std::uint64_t m = part.acim_cells(); m != 0; m &= m - 1) {
    total += unit_count(params, part, cell_exponent(std::countr_zero(m)));
  }
  if (params.composition == Composition::split_dac) total += 1.0;  // bridge
  return total;
}

CapArrayInstance sample_instance(const AnalogParams& params, const BitPartition& part,
                                 std::uint64_t seed) {
  validate(params);
  CapArrayInstance inst;
  inst.seed = seed;
  inst.acim_cells = part.acim_cells();
  inst.polarity_gain_asymmetry = params.polarity_gain_asymmetry;
  inst.ideal = params.sigma_u == 0.0 && params.polarity_gain_asymmetry == 0.0;

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool split = params.composition == Composition::split_dac;
  for (int p = 0; p < kLanes; ++p) {
    // The bridge capacitor's error scales the whole attenuated section of a lane.
    const double bridge = split ? params.sigma_u * normal(gen) : 0.0;
    for (std::uint64_t m = inst.acim_cells; m != 0; m &= m - 1) {
      const int c = std::countr_zero(m);
      const int e = cell_exponent(c);
      const double sd = params.sigma_u / std::sqrt(unit_count(params, part, e));
      double eps = sd * normal(gen);
      if (in_attenuated_section(params, e)) eps = (1.0 + eps) * (1.0 + bridge) - 1.0;
      inst.eps[p][c] = eps;
    }
  }
  finish(inst, params.gain_error_mode);
  return inst;
}

CapArrayInstance ideal_instance(const BitPartition& part) {
  CapArrayInstance inst;
  inst.acim_cells = part.acim_cells();
  finish(inst, GainErrorMode::nominal_total);
  return inst;
}

double evaluate(const CapArrayInstance& inst, std::span<const ProductTerm> terms) {
  if (terms.size() > kLanes) throw std::invalid_argument("acim::evaluate: more than 16 lanes");
  if (inst.ideal) {
    std::int64_t sum = 0;
    for (const ProductTerm& t : terms) sum += t.sign * t.bits.weighted_sum(inst.acim_cells);
    return static_cast<double>(sum) / static_cast<double>(kLsbProductUnits);
  }
  const double pos_gain = 1.0 + inst.polarity_gain_asymmetry / 2.0;
  const double neg_gain = 1.0 - inst.polarity_gain_asymmetry / 2.0;
  double v = 0.0;
  for (std::size_t p = 0; p < terms.size(); ++p) {
    const ProductTerm& t = terms[p];
    double lane = 0.0;
    for (std::uint64_t m = t.bits.mask() & inst.acim_cells; m != 0; m &= m - 1) {
      lane += inst.weight_lsb[p][std::countr_zero(m)];
    }
    v += t.sign > 0 ? lane * pos_gain : -(lane * neg_gain);
  }
  return v;
}

}  // namespace ccim::acim

#include "ccim/saradc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccim::adc {

namespace {

constexpr double kHalfLsb = 0.5;

// Lowest magnitude input at which the search reaches at least code m, m = 1..63.
// A binary search over positive weights is monotone, so this is the running
// minimum from the top of the per-code lower bounds.
std::array<double, kMaxMagnitude + 2> magnitude_thresholds(const CdacInstance& cdac, bool* monotonic) {
  std::array<double, kMaxMagnitude + 2> lower{};
  for (int m = 1; m <= kMaxMagnitude; ++m) {
    double prefix = 0.0;
    double bound = -std::numeric_limits<double>::infinity();
    for (int b = kMagnitudeBits - 1; b >= 0; --b) {
      if (((m >> b) & 1) == 0) continue;
      bound = std::max(bound, prefix + cdac.w[b] - kHalfLsb);
      prefix += cdac.w[b];
    }
    lower[m] = bound;
  }
  bool mono = true;
  for (int m = 2; m <= kMaxMagnitude; ++m) mono = mono && lower[m] > lower[m - 1];
  if (monotonic) *monotonic = mono;
  for (int m = kMaxMagnitude - 1; m >= 1; --m) lower[m] = std::min(lower[m], lower[m + 1]);
  lower[kMaxMagnitude + 1] = std::numeric_limits<double>::infinity();
  return lower;
}

}  // namespace

CdacInstance ideal_cdac() { return CdacInstance{}; }

CdacInstance sample_cdac(double sigma_u, int lsb_units, std::uint64_t seed) {
  if (!(sigma_u >= 0.0)) throw std::invalid_argument("sample_cdac: sigma_u must be >= 0");
  if (lsb_units < 1) throw std::invalid_argument("sample_cdac: lsb_units must be >= 1");
  CdacInstance cdac;
  cdac.seed = seed;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int b = 0; b < kBits; ++b) {
    const double nominal = std::ldexp(1.0, b);
    const double sd = sigma_u / std::sqrt(lsb_units * nominal);
    double w = 0.0;
    do {
      w = nominal * (1.0 + sd * normal(gen));
    } while (w <= 0.0);
    cdac.w[b] = w;
  }
  return cdac;
}

void validate(const AdcConfig& cfg) {
  if (cfg.offset_code < 0 || cfg.offset_code >= kCodes) {
    throw std::invalid_argument("adc: offset_code must be in [0, 127]");
  }
  if (!(cfg.comparator_noise_std >= 0.0)) throw std::invalid_argument("adc: comparator_noise_std must be >= 0");
}

double referred_input(const AdcConfig& cfg, double v) {
  const double vin = v + cfg.comparator_offset;
  return vin >= 0.0 ? vin + cfg.polarity_offset : vin - cfg.polarity_offset;
}

int convert(const CdacInstance& cdac, const AdcConfig& cfg, double v, std::mt19937_64* noise) {
  const bool noisy = cfg.comparator_noise_std > 0.0;
  if (noisy && noise == nullptr) throw std::invalid_argument("adc::convert: noise stream required");
  std::normal_distribution<double> normal(0.0, cfg.comparator_noise_std);
  auto draw = [&]() { return noisy ? normal(*noise) : 0.0; };

  const double vin = v + cfg.comparator_offset;
  const bool positive = vin + draw() >= 0.0;
  // SGNCLK inverts the conversion polarity; the magnitude offset does not follow it.
  const double a = (positive ? vin : -vin) + cfg.polarity_offset;
  double acc = 0.0;
  int mag = 0;
  for (int b = kMagnitudeBits - 1; b >= 0; --b) {
    if (a + draw() >= acc + cdac.w[b] - kHalfLsb) {
      acc += cdac.w[b];
      mag |= 1 << b;
    }
  }
  return std::clamp(cfg.offset_code + (positive ? mag : -mag), 0, kCodes - 1);
}

int ideal_code(double v, int offset_code) {
  const double r = std::floor(std::abs(v) + 0.5);
  const int mag = r >= kMaxMagnitude ? kMaxMagnitude : static_cast<int>(r);
  return std::clamp(offset_code + (v >= 0.0 ? mag : -mag), 0, kCodes - 1);
}

Transitions transition_levels(const CdacInstance& cdac, const AdcConfig& cfg) {
  validate(cfg);
  if (cfg.comparator_noise_std != 0.0) {
    throw std::invalid_argument("transition_levels: requires a noise-free comparator");
  }
  Transitions t;
  const auto thr = magnitude_thresholds(cdac, &t.monotonic);
  for (int m = 1; m < kMaxMagnitude; ++m) {
    if (!(thr[m + 1] > thr[m])) ++t.missing_codes;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double delta = cfg.polarity_offset;
  // Lowest input at which the signed magnitude reaches at least j.
  auto signed_level = [&](int j) {
    if (j > kMaxMagnitude) return inf;
    if (j < -kMaxMagnitude + 1) return -inf;
    if (j >= 1) return std::max(0.0, thr[j] - delta) - cfg.comparator_offset;
    return std::min(0.0, delta - thr[1 - j]) - cfg.comparator_offset;
  };
  for (int k = 1; k < kCodes; ++k) {
    // Clamping makes every code past the rails collapse onto the rail.
    const int j = k - cfg.offset_code;
    t.level[k - 1] = signed_level(j);
  }
  return t;
}

Linearity dnl_inl(const Transitions& t) {
  Linearity lin;
  // Code k occupies [level[k-1], level[k]).
  for (int k = 1; k < kCodes - 1; ++k) {
    const double lo = t.level[k - 1];
    const double hi = t.level[k];
    if (!std::isfinite(lo) || !std::isfinite(hi)) continue;
    lin.codes.push_back(k);
    lin.dnl.push_back((hi - lo) - 1.0);
  }
  double sq = 0.0;
  for (double d : lin.dnl) {
    sq += d * d;
    lin.dnl_max = std::max(lin.dnl_max, std::abs(d));
  }
  if (!lin.dnl.empty()) lin.dnl_rms = std::sqrt(sq / static_cast<double>(lin.dnl.size()));

  int first = -1;
  int last = -1;
  for (int k = 0; k < kCodes - 1; ++k) {
    if (!std::isfinite(t.level[k])) continue;
    if (first < 0) first = k;
    last = k;
  }
  if (first >= 0 && last > first) {
    const double slope = (t.level[last] - t.level[first]) / static_cast<double>(last - first);
    for (int k = first; k <= last; ++k) {
      const double inl = t.level[k] - (t.level[first] + slope * static_cast<double>(k - first));
      lin.inl.push_back(inl);
      lin.inl_max = std::max(lin.inl_max, std::abs(inl));
    }
  }
  return lin;
}

Linearity dnl_inl(const CdacInstance& cdac, const AdcConfig& cfg) {
  return dnl_inl(transition_levels(cdac, cfg));
}

}  // namespace ccim::adc

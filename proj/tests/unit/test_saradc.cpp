#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ccim/metrology.hpp"
#include "ccim/saradc.hpp"

using namespace ccim;

namespace {

// Smallest v with convert(v) >= k, by bisection.
double brute_threshold(const adc::CdacInstance& cdac, const adc::AdcConfig& cfg, int k) {
  double lo = -100.0;
  double hi = 100.0;
  if (adc::convert(cdac, cfg, lo) >= k) return -std::numeric_limits<double>::infinity();
  if (adc::convert(cdac, cfg, hi) < k) return std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (adc::convert(cdac, cfg, mid) >= k ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("convert examples on the ideal instance") {
  const auto cdac = adc::ideal_cdac();
  const adc::AdcConfig cfg;
  CHECK(adc::convert(cdac, cfg, 0.0) == 64);
  CHECK(adc::convert(cdac, cfg, 62.0) == 126);
  CHECK(adc::convert(cdac, cfg, 200.0) == 127);
  CHECK(adc::convert(cdac, cfg, 3.87548) == 68);
  CHECK(adc::convert(cdac, cfg, 0.5) == 65);
  CHECK(adc::convert(cdac, cfg, -0.5) == 63);
  CHECK(adc::convert(cdac, cfg, 0.4999) == 64);
}

TEST_CASE("ideal transition levels") {
  const auto t = adc::transition_levels(adc::ideal_cdac(), adc::AdcConfig{});
  // code k-1 -> k at k - 64.5; the 0 -> 1 step is unreachable.
  CHECK(std::isinf(t.level[0]));
  CHECK(t.level[0] < 0);
  CHECK(t.level[1] == doctest::Approx(-62.5));
  CHECK(t.level[63] == doctest::Approx(-0.5));
  CHECK(t.level[126] == doctest::Approx(62.5));
  CHECK(t.monotonic);
  CHECK(t.missing_codes == 0);
  const auto lin = adc::dnl_inl(t);
  CHECK(lin.dnl_max < 1e-9);
  CHECK(lin.inl_max < 1e-9);
  CHECK(lin.codes.size() == 125);
}

TEST_CASE("analytic transitions match a brute-force sweep") {
  adc::AdcConfig cfg;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto cdac = adc::sample_cdac(0.1, 1, 40 + s);
    const auto t = adc::transition_levels(cdac, cfg);
    for (int k = 1; k < adc::kCodes; ++k) {
      const double brute = brute_threshold(cdac, cfg, k);
      const double level = t.level[k - 1];
      if (std::isinf(level) || std::isinf(brute)) {
        CHECK(level == brute);
      } else {
        CHECK(std::abs(level - brute) <= 1e-9);
      }
    }
  }
  cfg.comparator_offset = 0.3;
  cfg.polarity_offset = -0.2;
  const auto cdac = adc::sample_cdac(0.0296, 16, 7);
  const auto t = adc::transition_levels(cdac, cfg);
  for (int k = 2; k < adc::kCodes; ++k) CHECK(std::abs(t.level[k - 1] - brute_threshold(cdac, cfg, k)) <= 1e-9);
}

TEST_CASE("ideal convert equals the closed form") {
  const auto cdac = adc::ideal_cdac();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(-80.0, 80.0);
  for (int k = 0; k < 100000; ++k) {
    const double x = v(rng);
    REQUIRE(adc::convert(cdac, adc::AdcConfig{}, x) == adc::ideal_code(x));
  }
  for (int h = -140; h <= 140; ++h) REQUIRE(adc::convert(cdac, adc::AdcConfig{}, h / 2.0) == adc::ideal_code(h / 2.0));
}

TEST_CASE("ideal odd symmetry") {
  const auto cdac = adc::ideal_cdac();
  for (int k = -6200; k <= 6200; ++k) {
    const double v = k / 100.0;
    REQUIRE(adc::convert(cdac, {}, -v) - 64 == -(adc::convert(cdac, {}, v) - 64));
  }
}

TEST_CASE("monotone for mismatched instances") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto cdac = adc::sample_cdac(0.05, 16, s);
    int prev = 0;
    for (int k = -7000; k <= 7000; ++k) {
      const int c = adc::convert(cdac, {}, k / 100.0);
      REQUIRE(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("noise determinism and validation") {
  adc::AdcConfig cfg;
  cfg.comparator_noise_std = 0.3;
  const auto cdac = adc::ideal_cdac();
  CHECK_THROWS(adc::convert(cdac, cfg, 1.0));
  CHECK_THROWS_AS(adc::transition_levels(cdac, cfg), std::invalid_argument);
  std::mt19937_64 a(5);
  std::mt19937_64 b(5);
  for (int k = 0; k < 100; ++k) REQUIRE(adc::convert(cdac, cfg, k * 0.37 - 20, &a) == adc::convert(cdac, cfg, k * 0.37 - 20, &b));

  adc::AdcConfig bad;
  bad.offset_code = 128;
  CHECK_THROWS_AS(adc::validate(bad), std::invalid_argument);
}

TEST_CASE("sample_cdac") {
  const auto zero = adc::sample_cdac(0.0, 16, 1);
  for (int b = 0; b < adc::kBits; ++b) CHECK(zero.w[b] == std::ldexp(1.0, b));
  const auto a = adc::sample_cdac(0.0296, 16, 8);
  const auto b = adc::sample_cdac(0.0296, 16, 8);
  CHECK(a.w == b.w);
  for (double w : a.w) CHECK(w > 0.0);
}

TEST_CASE("doubling sigma roughly doubles the median dnl_rms") {
  const auto lo = metrology::adc_characterization(0.0296, 16, 300, 1);
  const auto hi = metrology::adc_characterization(0.0592, 16, 300, 1);
  CHECK(hi.dnl_rms_dist.median / lo.dnl_rms_dist.median == doctest::Approx(2.0).epsilon(0.25));
  const auto ideal = metrology::adc_characterization(0.0, 16, 3, 1);
  CHECK(ideal.dnl_rms_dist.median < 1e-9);
}

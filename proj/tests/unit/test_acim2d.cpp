#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "ccim/acim2d.hpp"

using namespace ccim;

namespace {

std::array<ProductTerm, kLanes> uniform_lanes(int a, int b, int count) {
  std::array<ProductTerm, kLanes> t{};
  for (int p = 0; p < count; ++p) t[p] = split(partial_products(a, b), BitPartition{}, 0, 0);
  return t;
}

std::array<ProductTerm, kLanes> random_lanes(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mag(0, 127);
  std::uniform_int_distribution<int> bit(0, 1);
  std::array<ProductTerm, kLanes> t;
  for (auto& lane : t) {
    lane = split(partial_products(mag(rng), mag(rng)), BitPartition{}, static_cast<std::uint8_t>(bit(rng)), 0);
  }
  return t;
}

}  // namespace

TEST_CASE("ideal evaluate examples") {
  const auto inst = acim::ideal_instance(BitPartition{});
  CHECK(acim::evaluate(inst, uniform_lanes(127, 127, 1)) == doctest::Approx(7937.0 / 2048.0).epsilon(1e-15));
  CHECK(acim::evaluate(inst, uniform_lanes(127, 127, 16)) == 126992.0 / 2048.0);
  CHECK(acim::evaluate(inst, uniform_lanes(0, 0, 16)) == 0.0);
}

TEST_CASE("sample_instance") {
  acim::AnalogParams params;
  params.sigma_u = 0.0;
  const auto zero = acim::sample_instance(params, BitPartition{}, 3);
  for (const auto& lane : zero.eps) {
    for (double e : lane) CHECK(e == 0.0);
  }

  params.sigma_u = 0.0296;
  const auto a = acim::sample_instance(params, BitPartition{}, 99);
  const auto b = acim::sample_instance(params, BitPartition{}, 99);
  CHECK(a.eps == b.eps);
  CHECK(a.gain == b.gain);

  // 625 instances x 16 lanes = 10^4 draws of the single-unit cell (0,0).
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;
  for (std::uint64_t s = 0; s < 625; ++s) {
    const auto inst = acim::sample_instance(params, BitPartition{}, 1000 + s);
    for (const auto& lane : inst.eps) {
      const double e = lane[cell_index(0, 0)];
      sum += e;
      sum_sq += e * e;
      ++n;
    }
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(sd == doctest::Approx(0.0296).epsilon(0.05));
}

TEST_CASE("validate rejects bad params") {
  acim::AnalogParams p;
  p.sigma_u = -0.1;
  CHECK_THROWS_AS(acim::validate(p), std::invalid_argument);
  p = {};
  p.vrefad = 0.0;
  CHECK_THROWS_AS(acim::validate(p), std::invalid_argument);
}

TEST_CASE("sign flip negates v exactly for a fixed instance") {
  acim::AnalogParams params;
  params.polarity_gain_asymmetry = 0.0;
  std::mt19937_64 rng(17);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = acim::sample_instance(params, BitPartition{}, s);
    for (int k = 0; k < 200; ++k) {
      auto t = random_lanes(rng);
      const double v = acim::evaluate(inst, t);
      for (auto& lane : t) lane.sign = -lane.sign;
      REQUIRE(acim::evaluate(inst, t) == -v);
    }
  }
}

TEST_CASE("ideal v equals the integer residual sum") {
  const auto inst = acim::ideal_instance(BitPartition{});
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10000; ++k) {
    const auto t = random_lanes(rng);
    std::int64_t sum = 0;
    for (const auto& lane : t) sum += lane.sign * lane.r;
    const double want = static_cast<double>(sum) / 2048.0;
    REQUIRE(std::abs(acim::evaluate(inst, t) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("soft bound on |v| under mismatch") {
  acim::AnalogParams params;
  params.sigma_u = 0.05;
  std::mt19937_64 rng(29);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = acim::sample_instance(params, BitPartition{}, s);
    worst = std::max(worst, std::abs(acim::evaluate(inst, uniform_lanes(127, 127, 16))));
    for (int k = 0; k < 1000; ++k) worst = std::max(worst, std::abs(acim::evaluate(inst, random_lanes(rng))));
  }
  CHECK(worst <= 62.0 * (1.0 + 5.0 * params.sigma_u));
}

TEST_CASE("adding a positive bit never decreases ideal v") {
  const BitPartition part;
  const auto inst = acim::ideal_instance(part);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> cell(0, kMagBits * kMagBits - 1);
  for (int k = 0; k < 5000; ++k) {
    auto t = random_lanes(rng);
    for (auto& lane : t) lane.sign = 1;
    const double before = acim::evaluate(inst, t);
    const int lane = k % kLanes;
    const auto mask = t[lane].bits.mask() | (std::uint64_t{1} << cell(rng));
    t[lane] = split(PartialProductMatrix(mask), part, 0, 0);
    REQUIRE(acim::evaluate(inst, t) >= before);
  }
}

TEST_CASE("split-dac composition uses fewer unit capacitors") {
  acim::AnalogParams flat;
  acim::AnalogParams split_dac;
  split_dac.composition = acim::Composition::split_dac;
  CHECK(acim::lane_unit_count(split_dac, BitPartition{}) < acim::lane_unit_count(flat, BitPartition{}));
  CHECK(acim::unit_count(flat, BitPartition{}, 3) == 8.0);
  CHECK(acim::unit_count(split_dac, BitPartition{}, 7) == 2.0);
}

TEST_CASE("to_volts") {
  CHECK(acim::to_volts(64.0, acim::AnalogParams{}) == doctest::Approx(0.35));
}

#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ccim/numfmt.hpp"

using namespace ccim;

TEST_CASE("smf_encode") {
  CHECK(smf_encode(-127).sign == 1);
  CHECK(smf_encode(-127).mag == 127);
  CHECK(smf_encode(0, 0).sign == 0);
  CHECK(smf_encode(0, 0).mag == 0);
  CHECK(smf_encode(64).sign == 0);
  CHECK(smf_encode(64).mag == 64);
  CHECK_THROWS_AS(smf_encode(128), std::out_of_range);
  CHECK_THROWS_AS(smf_encode(-128), std::out_of_range);
}

TEST_CASE("negative zero compares equal to positive zero") {
  CHECK(smf_encode(0, 1) == smf_encode(0, 0));
  CHECK(smf_encode(0, 1).raw() == 0x80);
  CHECK(Smf8::from_raw(0xff).value() == -127);
}

TEST_CASE("partial_products examples") {
  const auto all = partial_products(127, 127);
  CHECK(all.mask() == kAllCells);
  CHECK(all.weighted_sum() == 16129);

  const auto p64 = partial_products(64, 64);
  CHECK(p64.mask() == (std::uint64_t{1} << cell_index(6, 6)));
  CHECK(p64.weighted_sum() == 4096);

  const auto p96 = partial_products(96, 96);
  const std::uint64_t want = (std::uint64_t{1} << cell_index(6, 6)) | (std::uint64_t{1} << cell_index(6, 5)) |
                             (std::uint64_t{1} << cell_index(5, 6)) | (std::uint64_t{1} << cell_index(5, 5));
  CHECK(p96.mask() == want);
  CHECK(p96.weighted_sum() == 9216);
}

TEST_CASE("split examples") {
  const BitPartition part;
  auto t = split(partial_products(127, 127), part, 0, 0);
  CHECK(t.sign == 1);
  CHECK(t.d == 4);
  CHECK(t.r == 7937);

  t = split(partial_products(64, 64), part, 0, 0);
  CHECK(t.d == 2);
  CHECK(t.r == 0);

  t = split(partial_products(1, 1), part, 1, 0);
  CHECK(t.sign == -1);
  CHECK(t.d == 0);
  CHECK(t.r == 1);
}

TEST_CASE("exact reconstruction, exhaustive") {
  const BitPartition part;
  int max_d = 0;
  int max_r = 0;
  for (int a = 0; a <= 127; ++a) {
    for (int b = 0; b <= 127; ++b) {
      for (int s = 0; s < 4; ++s) {
        const auto sa = static_cast<std::uint8_t>(s & 1);
        const auto sb = static_cast<std::uint8_t>(s >> 1);
        const auto t = split(partial_products(a, b), part, sa, sb);
        const int sign = (sa ^ sb) ? -1 : 1;
        REQUIRE(t.value() == static_cast<std::int64_t>(sign) * a * b);
        REQUIRE(t.trunc == 0);
        max_d = std::max(max_d, t.d);
        max_r = std::max(max_r, t.r);
        REQUIRE(t.d >= 0);
        REQUIRE(t.r >= 0);
      }
    }
  }
  CHECK(max_d == 4);
  CHECK(max_r == 7937);
}

TEST_CASE("truncation partition reconstructs with the discarded part") {
  const std::uint64_t trunc = (std::uint64_t{1} << cell_index(0, 0)) | (std::uint64_t{1} << cell_index(1, 0));
  const BitPartition part(BitPartition().dcim_cells(), trunc);
  for (int a = 0; a <= 127; a += 3) {
    for (int b = 0; b <= 127; b += 5) {
      const auto t = split(partial_products(a, b), part, 0, 1);
      CHECK(t.sign * (2048LL * t.d + t.r + t.trunc) == -a * b);
    }
  }
}

TEST_CASE("partition validation") {
  const std::uint64_t c66 = std::uint64_t{1} << cell_index(6, 6);
  CHECK_THROWS_AS(BitPartition(c66, c66), std::invalid_argument);
  CHECK_THROWS_AS(BitPartition(std::uint64_t{1} << cell_index(5, 5), 0), std::invalid_argument);
  CHECK_NOTHROW(BitPartition(c66, 0));
  const BitPartition def;
  CHECK(def.region(6, 6) == Region::dcim);
  CHECK(def.region(5, 5) == Region::acim);
  CHECK(def.min_acim_exponent() == 0);
}

TEST_CASE("contribution_table") {
  const auto def = contribution_table(BitPartition{});
  CHECK(def.dcim_units == 8192);
  CHECK(ContributionTable::fraction(def.dcim_units) == doctest::Approx(0.50790).epsilon(1e-4));
  CHECK(def.dcim_units + def.acim_units + def.trunc_units == ContributionTable::kTotalUnits);

  const auto none = contribution_table(BitPartition(0, 0));
  CHECK(none.dcim_units == 0);

  const auto tr = contribution_table(BitPartition(BitPartition().dcim_cells(), 1));
  CHECK(tr.trunc_units == 1);

  std::int64_t cols = 0;
  for (auto c : def.column_units) cols += c;
  CHECK(cols == ContributionTable::kTotalUnits);
}

TEST_CASE("complex_expand examples") {
  ComplexVector x;
  ComplexVector w;
  x.fill(complex_encode(127, -127));
  w.fill(complex_encode(-127, -127));
  const auto lanes = complex_expand(x, w);
  std::int64_t re = 0;
  std::int64_t im = 0;
  for (int p = 0; p < kLanes; ++p) {
    re += lanes.re[p].value();
    im += lanes.im[p].value();
  }
  CHECK(re == -258064);
  CHECK(im == 0);

  ComplexVector zero{};
  for (const auto& t : complex_expand(zero, w).re) {
    CHECK(t.d == 0);
    CHECK(t.r == 0);
  }

  ComplexVector xr;
  ComplexVector wr;
  for (int k = 0; k < kVectorLength; ++k) {
    xr[k] = complex_encode(10 * k - 35, 0);
    wr[k] = complex_encode(127 - 9 * k, 0);
  }
  for (const auto& t : complex_expand(xr, wr).im) CHECK(t.value() == 0);

  std::array<Complex8, 7> short_vec{};
  CHECK_THROWS_AS(complex_expand(short_vec, short_vec), std::invalid_argument);
}

TEST_CASE("complex_expand equals a direct complex MAC") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> val(-127, 127);
  for (int trial = 0; trial < 2000; ++trial) {
    ComplexVector x;
    ComplexVector w;
    std::int64_t want_re = 0;
    std::int64_t want_im = 0;
    for (int k = 0; k < kVectorLength; ++k) {
      const int a = val(rng), b = val(rng), c = val(rng), d = val(rng);
      x[k] = complex_encode(a, b);
      w[k] = complex_encode(c, d);
      want_re += a * c - b * d;
      want_im += a * d + b * c;
    }
    const auto lanes = complex_expand(x, w);
    std::int64_t re = 0;
    std::int64_t im = 0;
    for (int p = 0; p < kLanes; ++p) {
      re += lanes.re[p].value();
      im += lanes.im[p].value();
    }
    REQUIRE(re == want_re);
    REQUIRE(im == want_im);
  }
}

TEST_CASE("round_lsb_half_away") {
  CHECK(round_lsb_half_away(1024) == 1);
  CHECK(round_lsb_half_away(-1024) == -1);
  CHECK(round_lsb_half_away(1023) == 0);
  CHECK(round_lsb_half_away(63496) == 31);
  CHECK(round_lsb_half_away(0) == 0);
}

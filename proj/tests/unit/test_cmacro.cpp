#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <random>

#include "ccim/cmacro.hpp"
#include "ccim/random.hpp"

using namespace ccim;

namespace {

ComplexVector random_vector(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  ComplexVector v;
  for (auto& c : v) {
    c.re = Smf8::from_raw(static_cast<std::uint8_t>(byte(rng)));
    c.im = Smf8::from_raw(static_cast<std::uint8_t>(byte(rng)));
  }
  return v;
}

ComplexVector filled(int re, int im) {
  ComplexVector v;
  v.fill(complex_encode(re, im));
  return v;
}

MacroConfig mismatched(std::uint64_t seed) {
  MacroConfig cfg;
  cfg.mismatch_seed = seed;
  return cfg;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ccim_test_" + name);
}

}  // namespace

TEST_CASE("weight memory") {
  WeightMemory mem;
  const auto a = filled(5, -6);
  const auto b = filled(-100, 7);
  mem.write(0, 0, a);
  CHECK(mem.read(0, 0) == a);
  CHECK(mem.read(0, 1) == ComplexVector{});
  mem.write(0, 1, b);
  CHECK(mem.read(0, 0) == a);
  CHECK_THROWS_AS(mem.write(8, 0, a), std::out_of_range);
  CHECK_THROWS_AS(mem.read(0, 64), std::out_of_range);
  CHECK(WeightMemory::kCapacityBits == 65536);

  std::mt19937_64 rng(1);
  std::vector<ComplexVector> rows;
  for (int u = 0; u < kUnits; ++u) {
    for (int r = 0; r < kRows; ++r) {
      rows.push_back(random_vector(rng));
      mem.write(u, r, rows.back());
    }
  }
  for (int u = 0; u < kUnits; ++u) {
    for (int r = 0; r < kRows; ++r) REQUIRE(mem.read(u, r) == rows[u * kRows + r]);
  }
}

TEST_CASE("execute examples") {
  const Macro macro(MacroConfig{});
  WeightMemory mem;
  for (int u = 0; u < kUnits; ++u) mem.write(u, 0, filled(-127, -127));
  auto out = macro.execute(mem, filled(127, -127), RowSelect{});
  for (const auto& u : out.units) {
    CHECK(u.re_code == -126);
    CHECK(u.im_code == 0);
  }
  out = macro.execute(mem, ComplexVector{}, RowSelect{});
  for (const auto& u : out.units) {
    CHECK(u.re_code == 0);
    CHECK(u.im_code == 0);
  }
  for (int u = 0; u < kUnits; ++u) mem.write(u, 0, filled(127, 0));
  out = macro.execute(mem, filled(127, 0), RowSelect{});
  for (const auto& u : out.units) CHECK(u.re_code == 63);

  const auto trace = macro.compute(0, filled(127, 0), filled(127, 0));
  CHECK(trace.re.dcim == 32);
  CHECK(trace.re.adc_code - 64 == 31);
}

TEST_CASE("oracle and full-precision references") {
  ComplexVector x{};
  ComplexVector w{};
  x[0] = complex_encode(1, 0);
  w[0] = complex_encode(1, 0);
  CHECK(oracle_reference(x, w).re_code == 0);

  const auto fp = full_precision_reference(filled(127, -127), filled(-127, -127));
  CHECK(fp.first == -258064);
  CHECK(fp.second == 0);

  std::mt19937_64 rng(2);
  const auto v = random_vector(rng);
  const auto id = full_precision_reference(v, filled(1, 0));
  std::int64_t re = 0;
  std::int64_t im = 0;
  for (const auto& c : v) {
    re += c.re.value();
    im += c.im.value();
  }
  CHECK(id.first == re);
  CHECK(id.second == im);
  const auto z = full_precision_reference(v, ComplexVector{});
  CHECK(z.first == 0);
  CHECK(z.second == 0);
}

TEST_CASE("ideal execute equals the oracle within the quantization bound") {
  const Macro macro(MacroConfig{});
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20000; ++k) {
    const auto x = random_vector(rng);
    const auto w = random_vector(rng);
    const int unit = k % kUnits;
    const auto t = macro.compute(unit, x, w);
    const auto o = oracle_reference(x, w);
    REQUIRE(t.re.code == o.re_code);
    REQUIRE(t.im.code == o.im_code);
    const auto fp = full_precision_reference(x, w);
    REQUIRE(std::abs(t.re.code * 2048LL - fp.first) <= 1024);
    REQUIRE(std::abs(t.im.code * 2048LL - fp.second) <= 1024);
    REQUIRE(std::abs(t.re.code) <= 126);
  }
}

TEST_CASE("global negation under mismatch") {
  std::mt19937_64 rng(4);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Macro macro(mismatched(derive_seed(77, s)));
    for (int k = 0; k < 200; ++k) {
      auto x = random_vector(rng);
      const auto w = random_vector(rng);
      const auto a = macro.compute(k % kUnits, x, w);
      for (auto& c : x) c = c.negated();
      const auto b = macro.compute(k % kUnits, x, w);
      REQUIRE(b.re.code == -a.re.code);
      REQUIRE(b.im.code == -a.im.code);
    }
  }
}

TEST_CASE("mismatch instances are deterministic and distinct per path") {
  const Macro a(mismatched(9));
  const Macro b(mismatched(9));
  CHECK(a.array(3, 1).eps == b.array(3, 1).eps);
  CHECK(a.cdac(3, 1).w == b.cdac(3, 1).w);
  CHECK(a.array(3, 0).eps != a.array(3, 1).eps);
  CHECK(a.array(2, 0).eps != a.array(3, 0).eps);
}

TEST_CASE("units are independent: permuting weights and rows permutes outputs") {
  std::mt19937_64 rng(5);
  const Macro macro(mismatched(12));
  MacroConfig ideal_cfg;
  const Macro ideal(ideal_cfg);
  WeightMemory mem;
  WeightMemory permuted;
  RowSelect rows{};
  RowSelect prow{};
  const std::array<int, kUnits> perm{3, 1, 7, 0, 2, 6, 4, 5};
  for (int u = 0; u < kUnits; ++u) {
    rows[u] = (u * 11) % kRows;
    const auto w = random_vector(rng);
    mem.write(u, rows[u], w);
    permuted.write(perm[u], rows[u], w);
    prow[perm[u]] = rows[u];
  }
  const auto x = random_vector(rng);
  const auto a = ideal.execute(mem, x, rows);
  const auto b = ideal.execute(permuted, x, prow);
  for (int u = 0; u < kUnits; ++u) CHECK(a.units[u] == b.units[perm[u]]);
  // Under mismatch each unit has its own capacitors, so only shapes are checked.
  CHECK_NOTHROW(macro.execute(mem, x, rows));
}

TEST_CASE("shared row select") {
  MacroConfig cfg;
  cfg.shared_row_select = true;
  const Macro macro(cfg);
  WeightMemory mem;
  for (int u = 0; u < kUnits; ++u) {
    mem.write(u, 0, filled(127, 0));
    mem.write(u, 1, filled(-127, 0));
  }
  const RowSelect rows{0, 1, 1, 1, 1, 1, 1, 1};
  for (const auto& u : macro.execute(mem, filled(127, 0), rows).units) CHECK(u.re_code == 63);
}

TEST_CASE("combine saturates") {
  CHECK(combine(64, 127) == 127);
  CHECK(combine(-64, 0) == -128);
  CHECK(combine(-64, 1) == -127);
  CHECK(combine(10, 70) == 16);
}

TEST_CASE("step_pipeline has one sample of latency") {
  const Macro macro(MacroConfig{});
  WeightMemory mem;
  std::mt19937_64 rng(6);
  for (int u = 0; u < kUnits; ++u) mem.write(u, 0, random_vector(rng));
  const auto A = random_vector(rng);
  const auto B = random_vector(rng);
  PhaseState st;
  CHECK_FALSE(step_pipeline(macro, mem, st, A, RowSelect{}).has_value());
  const auto o1 = step_pipeline(macro, mem, st, B, RowSelect{});
  REQUIRE(o1.has_value());
  CHECK(*o1 == macro.execute(mem, A, RowSelect{}));
  const auto o2 = step_pipeline(macro, mem, st, A, RowSelect{});
  REQUIRE(o2.has_value());
  CHECK(*o2 == macro.execute(mem, B, RowSelect{}));

  PhaseState st2;
  step_pipeline(macro, mem, st2, A, RowSelect{});
  CHECK(*step_pipeline(macro, mem, st2, A, RowSelect{}) == macro.execute(mem, A, RowSelect{}));
}

TEST_CASE("weight image round trip") {
  std::mt19937_64 rng(7);
  WeightMemory mem;
  for (int u = 0; u < kUnits; ++u) {
    for (int r = 0; r < kRows; ++r) mem.write(u, r, random_vector(rng));
  }
  for (auto fmt : {ImageFormat::binary, ImageFormat::hex}) {
    const auto path = temp_path(fmt == ImageFormat::hex ? "img.hex" : "img.bin");
    save_weight_image(mem, path, fmt);
    const auto back = load_weight_image(path, fmt);
    for (int u = 0; u < kUnits; ++u) {
      for (int r = 0; r < kRows; ++r) {
        const auto& a = mem.read(u, r);
        const auto& b = back.read(u, r);
        for (int k = 0; k < kVectorLength; ++k) {
          REQUIRE(a[k].re.raw() == b[k].re.raw());
          REQUIRE(a[k].im.raw() == b[k].im.raw());
        }
      }
    }
    std::filesystem::remove(path);
  }
  WeightMemory known;
  known.write(0, 0, filled(5, -6));
  known.write(7, 63, filled(-127, 0));
  const auto path = temp_path("known.bin");
  save_weight_image(known, path, ImageFormat::binary);
  CHECK(std::filesystem::file_size(path) == 512 * 16);
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes[0] == 0x05);
  CHECK(bytes[1] == 0x86);
  CHECK(bytes[511 * 16] == 0xff);
  CHECK(bytes[511 * 16 + 1] == 0x00);
  std::filesystem::remove(path);
  CHECK(image_format_for("w.hex") == ImageFormat::hex);
  CHECK(image_format_for("w.bin") == ImageFormat::binary);

  const auto bad = temp_path("bad.hex");
  std::ofstream(bad) << "# comment\n00ff\n";
  CHECK_THROWS_AS(load_weight_image(bad, ImageFormat::hex), std::runtime_error);
  std::filesystem::remove(bad);
}

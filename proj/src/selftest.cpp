#include "ccim/selftest.hpp"

#include <random>
#include <sstream>

#include "ccim/cmacro.hpp"
#include "ccim/dcim.hpp"
#include "ccim/random.hpp"

namespace ccim {

namespace {

ComplexVector random_vector(std::mt19937_64& gen) {
  ComplexVector v;
  for (auto& c : v) {
    c = Complex8{Smf8::from_raw(static_cast<std::uint8_t>(gen())), Smf8::from_raw(static_cast<std::uint8_t>(gen()))};
  }
  return v;
}

SelfTestCheck check_reconstruction() {
  SelfTestCheck c{"exhaustive product reconstruction", true, ""};
  const BitPartition part;
  for (int a = 0; a <= kMaxMag && c.passed; ++a) {
    for (int b = 0; b <= kMaxMag && c.passed; ++b) {
      for (std::uint8_t s = 0; s < 4; ++s) {
        const ProductTerm t = split(partial_products(a, b), part, s & 1, s >> 1);
        const int expected = ((s & 1) ^ (s >> 1) ? -1 : 1) * a * b;
        if (t.value() != expected || t.d < 0 || t.d > 4 || t.r < 0 || t.r > 7937) {
          std::ostringstream os;
          os << "mismatch at " << a << "x" << b << " signs " << int(s);
          c = {c.name, false, os.str()};
          break;
        }
      }
    }
  }
  if (c.passed) c.detail = "128x128 magnitudes x 4 sign pairs";
  return c;
}

}  // namespace

std::vector<SelfTestCheck> run_selftest(std::uint64_t seed, int scale) {
  std::vector<SelfTestCheck> out;
  out.push_back(check_reconstruction());

  const int n = 10000 * scale;
  std::mt19937_64 gen(seed);
  const Macro ideal{MacroConfig{}};
  {
    SelfTestCheck c{"ideal execute == integer oracle", true, ""};
    SelfTestCheck q{"quantization bound |code*2048 - exact| <= 1024", true, ""};
    SelfTestCheck d{"digital path == sum of signed digital groups", true, ""};
    for (int i = 0; i < n; ++i) {
      const ComplexVector x = random_vector(gen);
      const ComplexVector w = random_vector(gen);
      const int unit = i % kUnits;
      const UnitTrace t = ideal.compute(unit, x, w);
      const UnitOutput o = oracle_reference(x, w);
      if (t.re.code != o.re_code || t.im.code != o.im_code) c.passed = false;
      const auto [re, im] = full_precision_reference(x, w);
      const auto bound = [](std::int64_t e) { return e <= 1024 && e >= -1024; };
      if (!bound(t.re.code * kLsbProductUnits - re) || !bound(t.im.code * kLsbProductUnits - im)) q.passed = false;
      const LaneTerms lanes = complex_expand(x, w);
      int sum = 0;
      for (const auto& term : lanes.re) sum += term.sign * term.d;
      if (dcim::evaluate(lanes.re) != sum) d.passed = false;
    }
    c.detail = q.detail = d.detail = std::to_string(n) + " random vectors";
    out.push_back(c);
    out.push_back(q);
    out.push_back(d);
  }
  {
    SelfTestCheck c{"ideal ADC == closed-form quantizer", true, ""};
    std::uniform_real_distribution<double> u(-70.0, 70.0);
    const adc::CdacInstance cdac = adc::ideal_cdac();
    for (int i = 0; i < n; ++i) {
      const double v = u(gen);
      if (adc::convert(cdac, adc::AdcConfig{}, v) != adc::ideal_code(v)) c.passed = false;
    }
    c.detail = std::to_string(n) + " random inputs";
    out.push_back(c);
  }
  {
    SelfTestCheck c{"global negation under mismatch", true, ""};
    const int seeds = 10 * scale;
    for (int s = 0; s < seeds && c.passed; ++s) {
      MacroConfig cfg;
      cfg.mismatch_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
      const Macro m(cfg);
      for (int i = 0; i < 200; ++i) {
        ComplexVector x = random_vector(gen);
        const ComplexVector w = random_vector(gen);
        ComplexVector neg;
        for (int k = 0; k < kVectorLength; ++k) neg[k] = x[k].negated();
        const int unit = i % kUnits;
        const UnitTrace a = m.compute(unit, x, w);
        const UnitTrace b = m.compute(unit, neg, w);
        if (a.re.code != -b.re.code || a.im.code != -b.im.code) {
          c.passed = false;
          break;
        }
      }
    }
    c.detail = std::to_string(seeds) + " mismatch seeds x 200 vectors";
    out.push_back(c);
  }
  return out;
}

}  // namespace ccim

#include "ccim/cmacro.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccim/dcim.hpp"
#include "ccim/random.hpp"

namespace ccim {

void WeightMemory::check(int unit, int row) {
  if (unit < 0 || unit >= kUnits) throw std::out_of_range("weight memory: unit index " + std::to_string(unit));
  if (row < 0 || row >= kRows) throw std::out_of_range("weight memory: row index " + std::to_string(row));
}

void WeightMemory::write(int unit, int row, std::span<const Complex8> weights) {
  check(unit, row);
  if (weights.size() != kVectorLength) throw std::invalid_argument("weight memory: row must hold 8 weights");
  std::copy(weights.begin(), weights.end(), rows_[unit][row].begin());
}

const ComplexVector& WeightMemory::read(int unit, int row) const {
  check(unit, row);
  return rows_[unit][row];
}

Macro::Macro(MacroConfig cfg) : cfg_(std::move(cfg)) {
  acim::validate(cfg_.analog);
  adc::validate(cfg_.adc);
  if (cfg_.cdac_lsb_units < 1) throw std::invalid_argument("macro: cdac_lsb_units must be >= 1");
  for (int u = 0; u < kUnits; ++u) {
    for (int o = 0; o < 2; ++o) {
      OutputPath& path = paths_[u][o];
      if (cfg_.ideal()) {
        path.array = acim::ideal_instance(cfg_.partition);
        // Reference polarity asymmetry is a systematic effect, present in ideal mode too.
        if (cfg_.analog.polarity_gain_asymmetry != 0.0) {
          acim::AnalogParams p = cfg_.analog;
          p.sigma_u = 0.0;
          path.array = acim::sample_instance(p, cfg_.partition, 0);
        }
        path.cdac = adc::ideal_cdac();
        continue;
      }
      const std::uint64_t base = 4u * static_cast<std::uint64_t>(2 * u + o);
      path.array = acim::sample_instance(cfg_.analog, cfg_.partition, derive_seed(*cfg_.mismatch_seed, base));
      path.cdac = adc::sample_cdac(cfg_.effective_cdac_sigma(), cfg_.cdac_lsb_units,
                                   derive_seed(*cfg_.mismatch_seed, base + 1));
    }
  }
}

int combine(int dcim, int adc_code, int offset_code) {
  return std::clamp(dcim + adc_code - offset_code, -128, 127);
}

PathTrace Macro::run_path(const OutputPath& path, std::span<const ProductTerm> terms,
                          std::mt19937_64* noise) const {
  PathTrace t;
  t.dcim = dcim::evaluate(terms, cfg_.partition);
  t.v = acim::evaluate(path.array, terms);
  t.referred = adc::referred_input(cfg_.adc, t.v);
  t.adc_code = adc::convert(path.cdac, cfg_.adc, t.v, noise);
  t.code = combine(t.dcim, t.adc_code, cfg_.adc.offset_code);
  return t;
}

UnitTrace Macro::compute(int unit, std::span<const Complex8> input, std::span<const Complex8> weights,
                         std::mt19937_64* noise) const {
  if (unit < 0 || unit >= kUnits) throw std::out_of_range("macro: unit index " + std::to_string(unit));
  const LaneTerms lanes = complex_expand(input, weights, cfg_.partition);
  UnitTrace trace;
  trace.re = run_path(paths_[unit][0], lanes.re, noise);
  trace.im = run_path(paths_[unit][1], lanes.im, noise);
  return trace;
}

MacroOutput Macro::execute(const WeightMemory& mem, std::span<const Complex8> input, const RowSelect& rows,
                           std::mt19937_64* noise) const {
  MacroOutput out;
  for (int u = 0; u < kUnits; ++u) {
    const int row = cfg_.shared_row_select ? rows[0] : rows[u];
    const UnitTrace t = compute(u, input, mem.read(u, row), noise);
    out.units[u] = UnitOutput{t.re.code, t.im.code};
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> full_precision_reference(std::span<const Complex8> input,
                                                                std::span<const Complex8> weights) {
  if (input.size() != weights.size()) throw std::invalid_argument("full_precision_reference: length mismatch");
  std::int64_t re = 0;
  std::int64_t im = 0;
  for (std::size_t k = 0; k < input.size(); ++k) {
    const std::int64_t a = input[k].re.value();
    const std::int64_t b = input[k].im.value();
    const std::int64_t c = weights[k].re.value();
    const std::int64_t d = weights[k].im.value();
    re += a * c - b * d;
    im += a * d + b * c;
  }
  return {re, im};
}

namespace {

struct SplitSum {
  std::int64_t digital = 0;   // units of 2048
  std::int64_t residual = 0;  // product units
};

// Accumulates one signed product straight from operand bits.
void accumulate(SplitSum& s, Smf8 x, Smf8 w, int extra_sign, const BitPartition& part) {
  const int sign = ((x.sign ^ w.sign) ? -1 : 1) * extra_sign;
  std::int64_t digital = 0;
  std::int64_t residual = 0;
  for (int i = 0; i < kMagBits; ++i) {
    for (int j = 0; j < kMagBits; ++j) {
      if (!(((x.mag >> i) & 1) && ((w.mag >> j) & 1))) continue;
      switch (part.region(i, j)) {
        case Region::dcim: digital += std::int64_t{1} << (i + j); break;
        case Region::acim: residual += std::int64_t{1} << (i + j); break;
        case Region::trunc: break;
      }
    }
  }
  s.digital += sign * digital / kLsbProductUnits;
  s.residual += sign * residual;
}

int finish(const SplitSum& s) {
  const std::int64_t analog =
      std::clamp<std::int64_t>(round_lsb_half_away(s.residual), -adc::kMaxMagnitude, adc::kMaxMagnitude);
  return static_cast<int>(std::clamp<std::int64_t>(s.digital + analog, -128, 127));
}

}  // namespace

UnitOutput oracle_reference(std::span<const Complex8> input, std::span<const Complex8> weights,
                            const BitPartition& part) {
  if (input.size() != weights.size()) throw std::invalid_argument("oracle_reference: length mismatch");
  SplitSum re;
  SplitSum im;
  for (std::size_t k = 0; k < input.size(); ++k) {
    accumulate(re, input[k].re, weights[k].re, 1, part);
    accumulate(re, input[k].im, weights[k].im, -1, part);
    accumulate(im, input[k].re, weights[k].im, 1, part);
    accumulate(im, input[k].im, weights[k].re, 1, part);
  }
  return UnitOutput{finish(re), finish(im)};
}

std::optional<MacroOutput> step_pipeline(const Macro& macro, const WeightMemory& mem, PhaseState& state,
                                         std::span<const Complex8> new_input, const RowSelect& new_rows,
                                         std::mt19937_64* noise) {
  if (new_input.size() != kVectorLength) throw std::invalid_argument("step_pipeline: input must have length 8");
  std::optional<MacroOutput> out;
  if (state.latched) out = macro.execute(mem, state.input, state.rows, noise);
  std::copy(new_input.begin(), new_input.end(), state.input.begin());
  state.rows = new_rows;
  state.latched = true;
  state.phase = PhaseState::Phase::converting;
  return out;
}

// --- weight image -----------------------------------------------------------

namespace {

constexpr std::size_t kRowBytes = 2 * kVectorLength;
constexpr std::size_t kImageRows = std::size_t{kUnits} * kRows;

std::array<std::uint8_t, kRowBytes> pack_row(const ComplexVector& row) {
  std::array<std::uint8_t, kRowBytes> bytes{};
  for (int k = 0; k < kVectorLength; ++k) {
    bytes[2 * k] = row[k].re.raw();
    bytes[2 * k + 1] = row[k].im.raw();
  }
  return bytes;
}

ComplexVector unpack_row(std::span<const std::uint8_t, kRowBytes> bytes) {
  ComplexVector row{};
  for (int k = 0; k < kVectorLength; ++k) {
    row[k] = Complex8{Smf8::from_raw(bytes[2 * k]), Smf8::from_raw(bytes[2 * k + 1])};
  }
  return row;
}

}  // namespace

ImageFormat image_format_for(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return (ext == ".hex" || ext == ".txt") ? ImageFormat::hex : ImageFormat::binary;
}

void save_weight_image(const WeightMemory& mem, const std::filesystem::path& path, ImageFormat fmt) {
  std::ofstream os(path, fmt == ImageFormat::binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (int u = 0; u < kUnits; ++u) {
    for (int r = 0; r < kRows; ++r) {
      const auto bytes = pack_row(mem.read(u, r));
      if (fmt == ImageFormat::binary) {
        os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        continue;
      }
      std::ostringstream line;
      line << std::hex << std::setfill('0');
      for (std::uint8_t b : bytes) line << std::setw(2) << static_cast<int>(b);
      os << line.str() << '\n';
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

WeightMemory load_weight_image(const std::filesystem::path& path, ImageFormat fmt) {
  std::ifstream is(path, fmt == ImageFormat::binary ? std::ios::binary : std::ios::in);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> data;
  if (fmt == ImageFormat::binary) {
    data.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  } else {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::string digits;
      for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isxdigit(static_cast<unsigned char>(c))) {
          throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": non-hex character");
        }
        digits.push_back(c);
      }
      if (digits.empty()) continue;
      if (digits.size() != 2 * kRowBytes) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 32 hex digits");
      }
      for (std::size_t i = 0; i < digits.size(); i += 2) {
        data.push_back(static_cast<std::uint8_t>(std::stoi(digits.substr(i, 2), nullptr, 16)));
      }
    }
  }
  if (data.size() != kImageRows * kRowBytes) {
    throw std::runtime_error(path.string() + ": expected " + std::to_string(kImageRows * kRowBytes) +
                             " bytes, got " + std::to_string(data.size()));
  }
  WeightMemory mem;
  for (std::size_t idx = 0; idx < kImageRows; ++idx) {
    const auto row = unpack_row(std::span<const std::uint8_t, kRowBytes>(data.data() + idx * kRowBytes, kRowBytes));
    mem.write(static_cast<int>(idx / kRows), static_cast<int>(idx % kRows), row);
  }
  return mem;
}

}  // namespace ccim

#pragma once

// Macro integration: weight memory, eight complex units, the post-digital
// combiner and the exact-integer reference models.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <utility>

#include "ccim/acim2d.hpp"
#include "ccim/numfmt.hpp"
#include "ccim/saradc.hpp"

namespace ccim {

inline constexpr int kUnits = 8;
inline constexpr int kRows = 64;

using RowSelect = std::array<int, kUnits>;

/// 8 units x 64 rows x 8 complex weights x 16 bits = 64 kb.
class WeightMemory {
 public:
  static constexpr std::size_t kCapacityBits = std::size_t{kUnits} * kRows * kVectorLength * 16;

  /// Throws std::out_of_range on a bad unit or row index.
  void write(int unit, int row, std::span<const Complex8> weights);
  const ComplexVector& read(int unit, int row) const;

 private:
  static void check(int unit, int row);
  std::array<std::array<ComplexVector, kRows>, kUnits> rows_{};
};

struct MacroConfig {
  BitPartition partition;
  acim::AnalogParams analog;
  adc::AdcConfig adc;
  /// CDAC mismatch; defaults to analog.sigma_u when unset.
  std::optional<double> cdac_sigma_u;
  int cdac_lsb_units = 16;
  /// Unset selects ideal mode (no mismatch drawn).
  std::optional<std::uint64_t> mismatch_seed;
  /// When set, every unit uses row_select[0].
  bool shared_row_select = false;

  bool ideal() const { return !mismatch_seed.has_value(); }
  double effective_cdac_sigma() const { return cdac_sigma_u.value_or(analog.sigma_u); }
};

struct UnitOutput {
  int re_code = 0;
  int im_code = 0;
  friend bool operator==(const UnitOutput&, const UnitOutput&) = default;
};

struct MacroOutput {
  std::array<UnitOutput, kUnits> units{};
  friend bool operator==(const MacroOutput&, const MacroOutput&) = default;
};

/// Intermediate values of one output path, for metrology.
struct PathTrace {
  int dcim = 0;
  double v = 0.0;      // summing node, LSB units
  double referred = 0.0;
  int adc_code = 0;
  int code = 0;
};

struct UnitTrace {
  PathTrace re;
  PathTrace im;
};

class Macro {
 public:
  /// Draws all mismatch instances up front; throws std::invalid_argument on a bad config.
  explicit Macro(MacroConfig cfg);

  const MacroConfig& config() const { return cfg_; }
  const acim::CapArrayInstance& array(int unit, int output) const { return paths_.at(unit).at(output).array; }
  const adc::CdacInstance& cdac(int unit, int output) const { return paths_.at(unit).at(output).cdac; }

  /// One complex MAC on unit `unit` with explicit weights.
  UnitTrace compute(int unit, std::span<const Complex8> input, std::span<const Complex8> weights,
                    std::mt19937_64* noise = nullptr) const;

  MacroOutput execute(const WeightMemory& mem, std::span<const Complex8> input, const RowSelect& rows,
                      std::mt19937_64* noise = nullptr) const;

 private:
  struct OutputPath {
    acim::CapArrayInstance array;
    adc::CdacInstance cdac;
  };
  PathTrace run_path(const OutputPath& path, std::span<const ProductTerm> terms,
                     std::mt19937_64* noise) const;

  MacroConfig cfg_;
  std::array<std::array<OutputPath, 2>, kUnits> paths_;
};

/// Final 8-bit code: digital result plus signed ADC result, saturated to [-128, 127].
int combine(int dcim, int adc_code, int offset_code = 64);

/// Exact complex MAC (sum of a*c - b*d, sum of a*d + b*c).
std::pair<std::int64_t, std::int64_t> full_precision_reference(std::span<const Complex8> input,
                                                                std::span<const Complex8> weights);

/// Output codes from integer arithmetic alone: digital cells plus the analog
/// residual rounded half away from zero at 2048 granularity.
UnitOutput oracle_reference(std::span<const Complex8> input, std::span<const Complex8> weights,
                            const BitPartition& part = BitPartition{});

/// Sampling/conversion contract: inputs and row selects latched at the start of
/// a sampling phase are converted during the following conversion phase and the
/// result appears at the next sampling-phase boundary.
struct PhaseState {
  enum class Phase { sampling, converting };
  Phase phase = Phase::sampling;
  bool latched = false;
  ComplexVector input{};
  RowSelect rows{};
};

/// Advances one sample. Returns the output for the previously latched sample,
/// or nothing on the first step.
std::optional<MacroOutput> step_pipeline(const Macro& macro, const WeightMemory& mem, PhaseState& state,
                                         std::span<const Complex8> new_input, const RowSelect& new_rows,
                                         std::mt19937_64* noise = nullptr);

// Weight image: 512 rows x 16 bytes, row index = unit * 64 + row. Within a row,
// element k occupies bytes 2k (real) and 2k+1 (imaginary); each byte is
// sign << 7 | magnitude. The hex form writes one row per line as 32 hex digits
// in the same byte order; blank lines and '#' comments are ignored.
enum class ImageFormat { binary, hex };

void save_weight_image(const WeightMemory& mem, const std::filesystem::path& path, ImageFormat fmt);
/// Throws std::runtime_error on a malformed or truncated image.
WeightMemory load_weight_image(const std::filesystem::path& path, ImageFormat fmt);
/// Picks hex for ".hex"/".txt" extensions, binary otherwise.
ImageFormat image_format_for(const std::filesystem::path& path);

}  // namespace ccim

#pragma once

// Signed-magnitude operands, partial-product decomposition and the
// digital/analog/truncated bit partition of the 7x7 magnitude product.

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace ccim {

inline constexpr int kMagBits = 7;
inline constexpr int kMaxMag = 127;
inline constexpr int kVectorLength = 8;
inline constexpr int kLanes = 2 * kVectorLength;
/// One ADC LSB expressed in product units (2^11).
inline constexpr std::int64_t kLsbProductUnits = 2048;
/// Exponent of the lowest cell that may be routed to the digital path.
inline constexpr int kDcimMinExponent = 11;

/// 8-bit signed-magnitude scalar: bit 7 is the sign, bits 6..0 the magnitude.
struct Smf8 {
  std::uint8_t sign = 0;
  std::uint8_t mag = 0;

  constexpr int value() const { return sign ? -static_cast<int>(mag) : static_cast<int>(mag); }
  constexpr std::uint8_t raw() const { return static_cast<std::uint8_t>((sign << 7) | mag); }
  static constexpr Smf8 from_raw(std::uint8_t byte) {
    return Smf8{static_cast<std::uint8_t>(byte >> 7), static_cast<std::uint8_t>(byte & 0x7f)};
  }
  constexpr Smf8 negated() const { return Smf8{static_cast<std::uint8_t>(sign ^ 1u), mag}; }

  // +0 and -0 compare equal.
  friend constexpr bool operator==(Smf8 a, Smf8 b) { return a.value() == b.value(); }
};

struct Complex8 {
  Smf8 re;
  Smf8 im;

  constexpr Complex8 negated() const { return Complex8{re.negated(), im.negated()}; }
  friend constexpr bool operator==(Complex8 a, Complex8 b) { return a.re == b.re && a.im == b.im; }
};

using ComplexVector = std::array<Complex8, kVectorLength>;

/// Throws std::out_of_range when |v| > 127.
Smf8 smf_encode(int v, std::uint8_t sign_of_zero = 0);
Complex8 complex_encode(int re, int im);

/// Bit index of cell (i, j) in a 49-bit mask; i indexes the input bit, j the weight bit.
constexpr int cell_index(int i, int j) { return i * kMagBits + j; }
constexpr int cell_exponent(int index) { return index / kMagBits + index % kMagBits; }
inline constexpr std::uint64_t kAllCells = (std::uint64_t{1} << (kMagBits * kMagBits)) - 1;

/// AND-array of the two magnitudes. bits()[i][j] contributes 2^(i+j).
class PartialProductMatrix {
 public:
  constexpr PartialProductMatrix() = default;
  constexpr explicit PartialProductMatrix(std::uint64_t mask) : mask_(mask & kAllCells) {}

  constexpr bool bit(int i, int j) const { return (mask_ >> cell_index(i, j)) & 1u; }
  constexpr std::uint64_t mask() const { return mask_; }
  std::int64_t weighted_sum() const;
  std::int64_t weighted_sum(std::uint64_t cells) const;

  friend constexpr bool operator==(PartialProductMatrix, PartialProductMatrix) = default;

 private:
  std::uint64_t mask_ = 0;
};

PartialProductMatrix partial_products(int mag_in, int mag_w);

enum class Region : std::uint8_t { dcim, acim, trunc };

/// Assignment of every (i, j) cell to exactly one of the three paths.
/// Cells not named as digital or truncated belong to the analog path.
class BitPartition {
 public:
  /// Default: {(6,6),(6,5),(5,6)} digital, nothing truncated.
  BitPartition();
  /// Throws std::invalid_argument if the sets overlap or a digital cell has i+j < 11.
  BitPartition(std::uint64_t dcim_cells, std::uint64_t trunc_cells);

  std::uint64_t dcim_cells() const { return dcim_; }
  std::uint64_t acim_cells() const { return kAllCells & ~dcim_ & ~trunc_; }
  std::uint64_t trunc_cells() const { return trunc_; }
  Region region(int i, int j) const;
  /// Lowest exponent among analog cells, or -1 if there are none.
  int min_acim_exponent() const;

  friend bool operator==(const BitPartition&, const BitPartition&) = default;

 private:
  std::uint64_t dcim_;
  std::uint64_t trunc_;
};

/// One signed real product split into its digital and analog parts.
struct ProductTerm {
  int sign = 1;  // +1 or -1
  int d = 0;     // digital group value in units of 2048
  int r = 0;     // analog residual in product units
  int trunc = 0; // discarded value in product units
  PartialProductMatrix bits;

  std::int64_t value() const { return sign * (kLsbProductUnits * d + r); }
};

ProductTerm split(PartialProductMatrix ppm, const BitPartition& part, std::uint8_t sign_in,
                  std::uint8_t sign_w);
ProductTerm make_term(Smf8 in, Smf8 w, const BitPartition& part);

/// Share of the total 127*127 weight carried by each weight column and each set.
/// Shares are exact: units / kTotalUnits.
struct ContributionTable {
  static constexpr std::int64_t kTotalUnits = 16129;
  std::array<std::int64_t, kMagBits> column_units{};
  std::int64_t dcim_units = 0;
  std::int64_t acim_units = 0;
  std::int64_t trunc_units = 0;

  static double fraction(std::int64_t units) {
    return static_cast<double>(units) / static_cast<double>(kTotalUnits);
  }
};

ContributionTable contribution_table(const BitPartition& part);

struct LaneTerms {
  std::array<ProductTerm, kLanes> re;
  std::array<ProductTerm, kLanes> im;
};

/// Lane k holds the Re(x)-driven product of element k, lane 8+k the Im(x)-driven one.
/// The (Im x, Im w) lane of the real output carries an extra sign inversion.
/// Throws std::invalid_argument unless both spans have length 8.
LaneTerms complex_expand(std::span<const Complex8> x, std::span<const Complex8> w,
                         const BitPartition& part = BitPartition{});

/// Integer division by 2048 with ties away from zero.
constexpr std::int64_t round_lsb_half_away(std::int64_t n) {
  const std::int64_t a = n < 0 ? -n : n;
  const std::int64_t q = (a + kLsbProductUnits / 2) / kLsbProductUnits;
  return n < 0 ? -q : q;
}

}  // namespace ccim

#include "ccim/numfmt.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace ccim {

namespace {

constexpr std::uint64_t default_dcim_cells() {
  return (std::uint64_t{1} << cell_index(6, 6)) | (std::uint64_t{1} << cell_index(6, 5)) |
         (std::uint64_t{1} << cell_index(5, 6));
}

}  // namespace

Smf8 smf_encode(int v, std::uint8_t sign_of_zero) {
  if (v < -kMaxMag || v > kMaxMag) {
    throw std::out_of_range("smf_encode: value " + std::to_string(v) + " outside [-127, 127]");
  }
  if (v == 0) return Smf8{static_cast<std::uint8_t>(sign_of_zero & 1u), 0};
  return Smf8{static_cast<std::uint8_t>(v < 0), static_cast<std::uint8_t>(v < 0 ? -v : v)};
}

Complex8 complex_encode(int re, int im) { return Complex8{smf_encode(re), smf_encode(im)}; }

std::int64_t PartialProductMatrix::weighted_sum() const { return weighted_sum(kAllCells); }

std::int64_t PartialProductMatrix::weighted_sum(std::uint64_t cells) const {
  std::int64_t sum = 0;
  for (std::uint64_t m = mask_ & cells; m != 0; m &= m - 1) {
    sum += std::int64_t{1} << cell_exponent(std::countr_zero(m));
  }
  return sum;
}

PartialProductMatrix partial_products(int mag_in, int mag_w) {
  if (mag_in < 0 || mag_in > kMaxMag || mag_w < 0 || mag_w > kMaxMag) {
    throw std::out_of_range("partial_products: magnitude outside [0, 127]");
  }
  std::uint64_t mask = 0;
  for (int i = 0; i < kMagBits; ++i) {
    if (((mag_in >> i) & 1) == 0) continue;
    // Row i of the AND array is the weight magnitude shifted into place.
    mask |= static_cast<std::uint64_t>(mag_w) << (i * kMagBits);
  }
  return PartialProductMatrix{mask};
}

BitPartition::BitPartition() : dcim_(default_dcim_cells()), trunc_(0) {}

BitPartition::BitPartition(std::uint64_t dcim_cells, std::uint64_t trunc_cells)
    : dcim_(dcim_cells), trunc_(trunc_cells) {
  if ((dcim_ | trunc_) & ~kAllCells) {
    throw std::invalid_argument("BitPartition: cell mask outside the 7x7 array");
  }
  if (dcim_ & trunc_) throw std::invalid_argument("BitPartition: digital and truncated sets overlap");
  for (std::uint64_t m = dcim_; m != 0; m &= m - 1) {
    if (cell_exponent(std::countr_zero(m)) < kDcimMinExponent) {
      throw std::invalid_argument("BitPartition: digital cells must have weight >= 2^11");
    }
  }
}

Region BitPartition::region(int i, int j) const {
  const std::uint64_t bit = std::uint64_t{1} << cell_index(i, j);
  if (dcim_ & bit) return Region::dcim;
  if (trunc_ & bit) return Region::trunc;
  return Region::acim;
}

int BitPartition::min_acim_exponent() const {
  int best = -1;
  for (std::uint64_t m = acim_cells(); m != 0; m &= m - 1) {
    const int e = cell_exponent(std::countr_zero(m));
    if (best < 0 || e < best) best = e;
  }
  return best;
}

ProductTerm split(PartialProductMatrix ppm, const BitPartition& part, std::uint8_t sign_in,
                  std::uint8_t sign_w) {
  ProductTerm t;
  t.sign = ((sign_in ^ sign_w) & 1u) ? -1 : 1;
  t.d = static_cast<int>(ppm.weighted_sum(part.dcim_cells()) >> kDcimMinExponent);
  t.r = static_cast<int>(ppm.weighted_sum(part.acim_cells()));
  t.trunc = static_cast<int>(ppm.weighted_sum(part.trunc_cells()));
  t.bits = ppm;
  return t;
}

ProductTerm make_term(Smf8 in, Smf8 w, const BitPartition& part) {
  return split(partial_products(in.mag, w.mag), part, in.sign, w.sign);
}

ContributionTable contribution_table(const BitPartition& part) {
  ContributionTable table;
  for (int i = 0; i < kMagBits; ++i) {
    for (int j = 0; j < kMagBits; ++j) {
      const std::int64_t w = std::int64_t{1} << (i + j);
      table.column_units[j] += w;
      switch (part.region(i, j)) {
        case Region::dcim: table.dcim_units += w; break;
        case Region::acim: table.acim_units += w; break;
        case Region::trunc: table.trunc_units += w; break;
      }
    }
  }
  return table;
}

LaneTerms complex_expand(std::span<const Complex8> x, std::span<const Complex8> w,
                         const BitPartition& part) {
  if (x.size() != kVectorLength || w.size() != kVectorLength) {
    throw std::invalid_argument("complex_expand: input and weight vectors must have length 8");
  }
  LaneTerms lanes;
  for (int k = 0; k < kVectorLength; ++k) {
    // Re: a*c - b*d.  Im: a*d + b*c.
    lanes.re[k] = make_term(x[k].re, w[k].re, part);
    lanes.re[kVectorLength + k] = make_term(x[k].im, w[k].im, part);
    lanes.re[kVectorLength + k].sign = -lanes.re[kVectorLength + k].sign;
    lanes.im[k] = make_term(x[k].re, w[k].im, part);
    lanes.im[kVectorLength + k] = make_term(x[k].im, w[k].re, part);
  }
  return lanes;
}

}  // namespace ccim

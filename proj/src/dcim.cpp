#include "ccim/dcim.hpp"

namespace ccim::dcim {

PhaseCounts count_phase(std::span<const ProductTerm> terms, Phase phase, const BitPartition& part) {
  const int wanted = phase == Phase::positive ? 1 : -1;
  const std::uint64_t cells = part.dcim_cells();
  auto selected = [cells](int i, int j) { return (cells >> cell_index(i, j)) & 1u; };
  PhaseCounts counts;
  for (const ProductTerm& t : terms) {
    if (t.sign != wanted) continue;
    if (selected(6, 6) && t.bits.bit(6, 6)) ++counts.c66;
    if (selected(6, 5) && t.bits.bit(6, 5)) ++counts.c65;
    if (selected(5, 6) && t.bits.bit(5, 6)) ++counts.c56;
  }
  return counts;
}

int dcim_result(const PhaseCounts& pos, const PhaseCounts& neg) {
  return pos.weighted() - neg.weighted();
}

int evaluate(std::span<const ProductTerm> terms, const BitPartition& part) {
  return dcim_result(count_phase(terms, Phase::positive, part),
                     count_phase(terms, Phase::negative, part));
}

}  // namespace ccim::dcim

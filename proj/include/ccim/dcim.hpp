#pragma once

// Digital path: per-weight-class set-bit counts over the 16 lanes, evaluated
// once for positive lanes and once for negative lanes, then subtracted.

#include <span>

#include "ccim/numfmt.hpp"

namespace ccim::dcim {

enum class Phase { positive, negative };

struct PhaseCounts {
  int c66 = 0;
  int c65 = 0;
  int c56 = 0;

  /// Digital magnitude of one phase in units of 2048.
  int weighted() const { return 2 * c66 + c65 + c56; }
  friend bool operator==(const PhaseCounts&, const PhaseCounts&) = default;
};

/// Counts only cells that the partition routes to the digital path.
PhaseCounts count_phase(std::span<const ProductTerm> terms, Phase phase,
                        const BitPartition& part = BitPartition{});

int dcim_result(const PhaseCounts& pos, const PhaseCounts& neg);

/// Both phases of one evaluation.
int evaluate(std::span<const ProductTerm> terms, const BitPartition& part = BitPartition{});

}  // namespace ccim::dcim

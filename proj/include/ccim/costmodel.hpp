#pragma once

// First-order relative cost accounting for three ways of doing a complex MAC
// in memory: the shared-weight hybrid macro, a macro that duplicates the
// complex weights, and one that computes the partial products sequentially.
// All quantities are in arbitrary units; only ratios are meaningful.

#include <array>
#include <optional>
#include <string>

namespace ccim::cost {

struct AreaPower {
  double area = 0.0;
  double power = 0.0;
};

struct ComponentCosts {
  AreaPower weight_array;
  AreaPower mac_logic;
  AreaPower control;
  AreaPower adc;
  double cycle_latency = 1.0;  // cycles per C-MAC, proposed architecture
};

/// Per-component multipliers a baseline applies to the proposed costs.
struct BaselineFactors {
  AreaPower weight_array{1.0, 1.0};
  AreaPower mac_logic{1.0, 1.0};
  AreaPower control{1.0, 1.0};
  AreaPower adc{1.0, 1.0};
  double latency = 1.0;
};

struct CostModel {
  ComponentCosts costs;
  BaselineFactors duplicated{{1.5, 1.5}, {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, 1.0};
  BaselineFactors sequential{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, 2.2};
};

enum class Architecture { proposed, duplicated, sequential };
enum class Metric { area, latency, power };

inline constexpr std::array<Architecture, 3> kArchitectures{Architecture::proposed, Architecture::duplicated,
                                                            Architecture::sequential};
inline constexpr std::array<Metric, 3> kMetrics{Metric::area, Metric::latency, Metric::power};

std::string to_string(Architecture a);
std::string to_string(Metric m);

struct ArchitectureTotals {
  double area = 0.0;
  double latency = 0.0;
  double power = 0.0;

  double get(Metric m) const;
};

struct CostTable {
  ArchitectureTotals proposed;
  ArchitectureTotals duplicated;
  ArchitectureTotals sequential;

  const ArchitectureTotals& get(Architecture a) const;
};

/// Throws std::invalid_argument on negative costs or factors.
CostTable evaluate_architectures(const CostModel& model);

struct Reduction {
  Metric metric;
  Architecture best_baseline;
  std::optional<double> reduction;  // 1 - proposed / best; unset when best is 0
};

/// Per metric, compares the proposed design with the cheaper baseline.
/// Negative values mean the proposed design is worse; they are not clamped.
std::array<Reduction, 3> reduction_report(const CostTable& table);

}  // namespace ccim::cost

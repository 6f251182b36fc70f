#include "ccim/costmodel.hpp"

#include <stdexcept>

namespace ccim::cost {

namespace {

void check(const AreaPower& ap, const char* what) {
  if (!(ap.area >= 0.0) || !(ap.power >= 0.0)) {
    throw std::invalid_argument(std::string("cost model: negative value in ") + what);
  }
}

ArchitectureTotals apply(const ComponentCosts& c, const BaselineFactors& f) {
  ArchitectureTotals t;
  t.area = c.weight_array.area * f.weight_array.area + c.mac_logic.area * f.mac_logic.area +
           c.control.area * f.control.area + c.adc.area * f.adc.area;
  t.power = c.weight_array.power * f.weight_array.power + c.mac_logic.power * f.mac_logic.power +
            c.control.power * f.control.power + c.adc.power * f.adc.power;
  t.latency = c.cycle_latency * f.latency;
  return t;
}

}  // namespace

std::string to_string(Architecture a) {
  switch (a) {
    case Architecture::proposed: return "proposed";
    case Architecture::duplicated: return "duplicated";
    case Architecture::sequential: return "sequential";
  }
  return "?";
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::area: return "area";
    case Metric::latency: return "latency";
    case Metric::power: return "power";
  }
  return "?";
}

double ArchitectureTotals::get(Metric m) const {
  switch (m) {
    case Metric::area: return area;
    case Metric::latency: return latency;
    case Metric::power: return power;
  }
  return 0.0;
}

const ArchitectureTotals& CostTable::get(Architecture a) const {
  switch (a) {
    case Architecture::proposed: return proposed;
    case Architecture::duplicated: return duplicated;
    case Architecture::sequential: return sequential;
  }
  return proposed;
}

CostTable evaluate_architectures(const CostModel& model) {
  const ComponentCosts& c = model.costs;
  check(c.weight_array, "weight_array");
  check(c.mac_logic, "mac_logic");
  check(c.control, "control");
  check(c.adc, "adc");
  if (!(c.cycle_latency >= 0.0)) throw std::invalid_argument("cost model: negative cycle_latency");
  for (const BaselineFactors* f : {&model.duplicated, &model.sequential}) {
    check(f->weight_array, "baseline factors");
    check(f->mac_logic, "baseline factors");
    check(f->control, "baseline factors");
    check(f->adc, "baseline factors");
    if (!(f->latency >= 0.0)) throw std::invalid_argument("cost model: negative latency factor");
  }
  // The proposed macro shares one weight array between the Re and Im paths.
  CostTable table;
  table.proposed = apply(c, BaselineFactors{});
  table.duplicated = apply(c, model.duplicated);
  table.sequential = apply(c, model.sequential);
  return table;
}

std::array<Reduction, 3> reduction_report(const CostTable& table) {
  std::array<Reduction, 3> out{};
  for (std::size_t i = 0; i < kMetrics.size(); ++i) {
    const Metric m = kMetrics[i];
    const double dup = table.duplicated.get(m);
    const double seq = table.sequential.get(m);
    Reduction r{m, dup <= seq ? Architecture::duplicated : Architecture::sequential, std::nullopt};
    const double best = table.get(r.best_baseline).get(m);
    if (best != 0.0) r.reduction = 1.0 - table.proposed.get(m) / best;
    out[i] = r;
  }
  return out;
}

}  // namespace ccim::cost

#include <doctest.h>

#include <stdexcept>

#include "ccim/costmodel.hpp"

using namespace ccim::cost;

TEST_CASE("weight-dominated identities") {
  CostModel m;
  m.costs.weight_array = {1.0, 1.0};
  const auto t = evaluate_architectures(m);
  CHECK(t.duplicated.area / t.proposed.area == 1.5);
  CHECK(t.duplicated.power / t.proposed.power == 1.5);
  CHECK(t.sequential.latency / t.proposed.latency == 2.2);
}

TEST_CASE("all-zero costs") {
  CostModel m;
  m.costs.cycle_latency = 0.0;
  const auto t = evaluate_architectures(m);
  for (auto a : kArchitectures) {
    for (auto metric : kMetrics) CHECK(t.get(a).get(metric) == 0.0);
  }
  for (const auto& r : reduction_report(t)) CHECK_FALSE(r.reduction.has_value());
}

TEST_CASE("reduction identities") {
  CostTable t;
  t.proposed = {0.65, 1.0, 2.0};
  t.duplicated = {1.0, 1.0, 1.5};
  t.sequential = {1.2, 2.2, 1.0};
  const auto r = reduction_report(t);
  CHECK(r[0].metric == Metric::area);
  CHECK(r[0].best_baseline == Architecture::duplicated);
  CHECK(*r[0].reduction == doctest::Approx(0.35));
  CHECK(*r[1].reduction == 0.0);
  CHECK(r[2].best_baseline == Architecture::sequential);
  CHECK(*r[2].reduction == doctest::Approx(-1.0));
}

TEST_CASE("scale invariance") {
  CostModel m;
  m.costs = {{3.0, 2.0}, {1.0, 0.5}, {0.25, 0.1}, {0.7, 0.9}, 1.0};
  const auto a = reduction_report(evaluate_architectures(m));
  CostModel s = m;
  for (auto* ap : {&s.costs.weight_array, &s.costs.mac_logic, &s.costs.control, &s.costs.adc}) {
    ap->area *= 7.5;
    ap->power *= 7.5;
  }
  s.costs.cycle_latency *= 7.5;
  const auto b = reduction_report(evaluate_architectures(s));
  for (int i = 0; i < 3; ++i) {
    CHECK(a[i].best_baseline == b[i].best_baseline);
    CHECK(*a[i].reduction == doctest::Approx(*b[i].reduction).epsilon(1e-12));
  }
}

TEST_CASE("negative costs are rejected") {
  CostModel m;
  m.costs.adc.area = -1.0;
  CHECK_THROWS_AS(evaluate_architectures(m), std::invalid_argument);
}

TEST_CASE("names") {
  CHECK(to_string(Architecture::sequential) == "sequential");
  CHECK(to_string(Metric::latency) == "latency");
}

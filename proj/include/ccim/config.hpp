#pragma once

// Run configuration: one JSON document covering the macro, experiment
// parameters, seeds and output settings. Schema: docs/config.md.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccim/cmacro.hpp"
#include "ccim/costmodel.hpp"
#include "ccim/doaapp.hpp"

namespace ccim {

/// Raised for malformed or inconsistent configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  MacroConfig macro;
  std::uint64_t seed = 7;
  std::int64_t trials = 100000;
  // mc-mismatch
  std::vector<double> sigma_list{0.0, 0.0148, 0.0296, 0.0592};
  int seeds = 50;
  std::int64_t trials_per_seed = 10000;
  // xfer
  int unit = 0;
  int repeats = 1;
  int zero_crossing_seeds = 20;
  // adc-char
  int adc_seeds = 1000;
  // doa
  doa::DoaScenario doa;
  int doa_trials = 200;
  // cost
  cost::CostModel cost;
  // output
  std::string out;
  std::string format;  // csv | json; empty selects the subcommand default
};

nlohmann::json to_json(const MacroConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);

/// Throws ConfigError on unknown keys, wrong types or invalid values.
MacroConfig macro_config_from_json(const nlohmann::json& j, MacroConfig base = {});
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace ccim

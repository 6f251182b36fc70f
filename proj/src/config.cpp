#include "ccim/config.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <fstream>
#include <set>

namespace ccim {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

json cells_to_json(std::uint64_t mask) {
  json arr = json::array();
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    const int c = std::countr_zero(m);
    arr.push_back({c / kMagBits, c % kMagBits});
  }
  return arr;
}

std::uint64_t cells_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of [i, j] pairs");
  std::uint64_t mask = 0;
  for (const json& cell : j) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() || !cell[1].is_number_integer()) {
      throw ConfigError(where + ": each cell must be [i, j]");
    }
    const int i = cell[0].get<int>();
    const int jj = cell[1].get<int>();
    if (i < 0 || i >= kMagBits || jj < 0 || jj >= kMagBits) throw ConfigError(where + ": cell index out of range");
    mask |= std::uint64_t{1} << cell_index(i, jj);
  }
  return mask;
}

json area_power(const cost::AreaPower& ap) { return {{"area", ap.area}, {"power", ap.power}}; }

void read_area_power(const json& j, const char* key, cost::AreaPower& dst, const std::string& where) {
  if (!j.contains(key)) return;
  const std::string w = where + "." + key;
  reject_unknown(j.at(key), {"area", "power"}, w);
  read(j.at(key), "area", dst.area, w);
  read(j.at(key), "power", dst.power, w);
}

json factors_to_json(const cost::BaselineFactors& f) {
  return {{"weight_array", area_power(f.weight_array)},
          {"mac_logic", area_power(f.mac_logic)},
          {"control", area_power(f.control)},
          {"adc", area_power(f.adc)},
          {"latency", f.latency}};
}

void read_factors(const json& j, cost::BaselineFactors& f, const std::string& where) {
  reject_unknown(j, {"weight_array", "mac_logic", "control", "adc", "latency"}, where);
  read_area_power(j, "weight_array", f.weight_array, where);
  read_area_power(j, "mac_logic", f.mac_logic, where);
  read_area_power(j, "control", f.control, where);
  read_area_power(j, "adc", f.adc, where);
  read(j, "latency", f.latency, where);
}

}  // namespace

json to_json(const MacroConfig& cfg) {
  json analog = {
      {"vrefsr", cfg.analog.vrefsr},
      {"vrefad", cfg.analog.vrefad},
      {"unit_cap", cfg.analog.unit_cap},
      {"sigma_u", cfg.analog.sigma_u},
      {"gain_error_mode",
       cfg.analog.gain_error_mode == acim::GainErrorMode::actual_total ? "actual-total" : "nominal-total"},
      {"composition", cfg.analog.composition == acim::Composition::flat ? "flat" : "split-dac"},
      {"split_bridge_exponent", cfg.analog.split_bridge_exponent},
      {"polarity_gain_asymmetry", cfg.analog.polarity_gain_asymmetry},
  };
  json adc = {
      {"offset_code", cfg.adc.offset_code},
      {"comparator_offset", cfg.adc.comparator_offset},
      {"comparator_noise_std", cfg.adc.comparator_noise_std},
      {"polarity_offset", cfg.adc.polarity_offset},
      {"cdac_sigma_u", cfg.cdac_sigma_u ? json(*cfg.cdac_sigma_u) : json(nullptr)},
      {"lsb_units", cfg.cdac_lsb_units},
  };
  json j = {
      {"mode", cfg.ideal() ? "ideal" : "mismatch"},
      {"partition", {{"dcim", cells_to_json(cfg.partition.dcim_cells())},
                     {"trunc", cells_to_json(cfg.partition.trunc_cells())}}},
      {"analog", analog},
      {"adc", adc},
      {"shared_row_select", cfg.shared_row_select},
  };
  j["mismatch_seed"] = cfg.mismatch_seed ? json(*cfg.mismatch_seed) : json(nullptr);
  return j;
}

MacroConfig macro_config_from_json(const json& j, MacroConfig cfg) {
  const std::string where = "macro";
  reject_unknown(j, {"mode", "mismatch_seed", "partition", "analog", "adc", "shared_row_select"}, where);
  if (j.contains("partition")) {
    const json& p = j.at("partition");
    reject_unknown(p, {"dcim", "trunc"}, where + ".partition");
    const std::uint64_t dcim = p.contains("dcim") ? cells_from_json(p.at("dcim"), where + ".partition.dcim")
                                                  : cfg.partition.dcim_cells();
    const std::uint64_t trunc = p.contains("trunc") ? cells_from_json(p.at("trunc"), where + ".partition.trunc")
                                                    : cfg.partition.trunc_cells();
    try {
      cfg.partition = BitPartition(dcim, trunc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("analog")) {
    const json& a = j.at("analog");
    const std::string w = where + ".analog";
    reject_unknown(a, {"vrefsr", "vrefad", "unit_cap", "sigma_u", "gain_error_mode", "composition",
                       "split_bridge_exponent", "polarity_gain_asymmetry"}, w);
    read(a, "vrefsr", cfg.analog.vrefsr, w);
    read(a, "vrefad", cfg.analog.vrefad, w);
    read(a, "unit_cap", cfg.analog.unit_cap, w);
    read(a, "sigma_u", cfg.analog.sigma_u, w);
    read(a, "split_bridge_exponent", cfg.analog.split_bridge_exponent, w);
    read(a, "polarity_gain_asymmetry", cfg.analog.polarity_gain_asymmetry, w);
    std::string mode, comp;
    read(a, "gain_error_mode", mode, w);
    read(a, "composition", comp, w);
    if (mode == "actual-total") cfg.analog.gain_error_mode = acim::GainErrorMode::actual_total;
    else if (mode == "nominal-total") cfg.analog.gain_error_mode = acim::GainErrorMode::nominal_total;
    else if (!mode.empty()) throw ConfigError(w + ".gain_error_mode: expected actual-total or nominal-total");
    if (comp == "flat") cfg.analog.composition = acim::Composition::flat;
    else if (comp == "split-dac") cfg.analog.composition = acim::Composition::split_dac;
    else if (!comp.empty()) throw ConfigError(w + ".composition: expected flat or split-dac");
  }
  if (j.contains("adc")) {
    const json& a = j.at("adc");
    const std::string w = where + ".adc";
    reject_unknown(a, {"offset_code", "comparator_offset", "comparator_noise_std", "polarity_offset",
                       "cdac_sigma_u", "lsb_units"}, w);
    read(a, "offset_code", cfg.adc.offset_code, w);
    read(a, "comparator_offset", cfg.adc.comparator_offset, w);
    read(a, "comparator_noise_std", cfg.adc.comparator_noise_std, w);
    read(a, "polarity_offset", cfg.adc.polarity_offset, w);
    read(a, "lsb_units", cfg.cdac_lsb_units, w);
    if (a.contains("cdac_sigma_u")) {
      if (a.at("cdac_sigma_u").is_null()) cfg.cdac_sigma_u.reset();
      else {
        double v = 0;
        read(a, "cdac_sigma_u", v, w);
        cfg.cdac_sigma_u = v;
      }
    }
  }
  read(j, "shared_row_select", cfg.shared_row_select, where);
  std::string mode = cfg.ideal() ? "ideal" : "mismatch";
  read(j, "mode", mode, where);
  if (mode == "ideal") {
    cfg.mismatch_seed.reset();
  } else if (mode == "mismatch") {
    std::uint64_t s = cfg.mismatch_seed.value_or(1);
    if (j.contains("mismatch_seed") && !j.at("mismatch_seed").is_null()) read(j, "mismatch_seed", s, where);
    cfg.mismatch_seed = s;
  } else {
    throw ConfigError(where + ".mode: expected ideal or mismatch");
  }
  try {
    acim::validate(cfg.analog);
    adc::validate(cfg.adc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.cdac_lsb_units < 1) throw ConfigError(where + ".adc.lsb_units must be >= 1");
  if (cfg.cdac_sigma_u && !(*cfg.cdac_sigma_u >= 0.0)) throw ConfigError(where + ".adc.cdac_sigma_u must be >= 0");
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doa = {
      {"n_antennas", cfg.doa.n_antennas},
      {"source_angle_deg", cfg.doa.source_angle_deg},
      {"snr_db", std::isinf(cfg.doa.snr_db) ? json("inf") : json(cfg.doa.snr_db)},
      {"n_snapshots", cfg.doa.n_snapshots},
      {"angle_grid", cfg.doa.angle_grid},
      {"signal_frequency", cfg.doa.signal_frequency},
      {"seed", cfg.doa.seed},
      {"trials", cfg.doa_trials},
  };
  const cost::ComponentCosts& c = cfg.cost.costs;
  json cost = {
      {"weight_array", area_power(c.weight_array)},
      {"mac_logic", area_power(c.mac_logic)},
      {"control", area_power(c.control)},
      {"adc", area_power(c.adc)},
      {"cycle_latency", c.cycle_latency},
      {"duplicated", factors_to_json(cfg.cost.duplicated)},
      {"sequential", factors_to_json(cfg.cost.sequential)},
  };
  return {
      {"macro", to_json(cfg.macro)},
      {"seed", cfg.seed},
      {"trials", cfg.trials},
      {"sigma_list", cfg.sigma_list},
      {"seeds", cfg.seeds},
      {"trials_per_seed", cfg.trials_per_seed},
      {"unit", cfg.unit},
      {"repeats", cfg.repeats},
      {"zero_crossing_seeds", cfg.zero_crossing_seeds},
      {"adc_seeds", cfg.adc_seeds},
      {"doa", doa},
      {"cost", cost},
      {"out", cfg.out},
      {"format", cfg.format},
  };
}

RunConfig run_config_from_json(const json& j, RunConfig cfg) {
  const std::string where = "config";
  reject_unknown(j, {"macro", "seed", "trials", "sigma_list", "seeds", "trials_per_seed", "unit", "repeats",
                     "zero_crossing_seeds", "adc_seeds", "doa", "cost", "out", "format"}, where);
  if (j.contains("macro")) cfg.macro = macro_config_from_json(j.at("macro"), cfg.macro);
  read(j, "seed", cfg.seed, where);
  read(j, "trials", cfg.trials, where);
  read(j, "sigma_list", cfg.sigma_list, where);
  read(j, "seeds", cfg.seeds, where);
  read(j, "trials_per_seed", cfg.trials_per_seed, where);
  read(j, "unit", cfg.unit, where);
  read(j, "repeats", cfg.repeats, where);
  read(j, "zero_crossing_seeds", cfg.zero_crossing_seeds, where);
  read(j, "adc_seeds", cfg.adc_seeds, where);
  read(j, "out", cfg.out, where);
  read(j, "format", cfg.format, where);
  if (j.contains("doa")) {
    const json& d = j.at("doa");
    const std::string w = where + ".doa";
    reject_unknown(d, {"n_antennas", "source_angle_deg", "snr_db", "n_snapshots", "angle_grid",
                       "signal_frequency", "seed", "trials"}, w);
    read(d, "n_antennas", cfg.doa.n_antennas, w);
    read(d, "source_angle_deg", cfg.doa.source_angle_deg, w);
    if (d.contains("snr_db") && (d.at("snr_db").is_null() || d.at("snr_db") == "inf")) {
      cfg.doa.snr_db = std::numeric_limits<double>::infinity();
    } else {
      read(d, "snr_db", cfg.doa.snr_db, w);
    }
    read(d, "n_snapshots", cfg.doa.n_snapshots, w);
    read(d, "angle_grid", cfg.doa.angle_grid, w);
    read(d, "signal_frequency", cfg.doa.signal_frequency, w);
    read(d, "seed", cfg.doa.seed, w);
    read(d, "trials", cfg.doa_trials, w);
  }
  if (j.contains("cost")) {
    const json& c = j.at("cost");
    const std::string w = where + ".cost";
    reject_unknown(c, {"weight_array", "mac_logic", "control", "adc", "cycle_latency", "duplicated", "sequential"}, w);
    read_area_power(c, "weight_array", cfg.cost.costs.weight_array, w);
    read_area_power(c, "mac_logic", cfg.cost.costs.mac_logic, w);
    read_area_power(c, "control", cfg.cost.costs.control, w);
    read_area_power(c, "adc", cfg.cost.costs.adc, w);
    read(c, "cycle_latency", cfg.cost.costs.cycle_latency, w);
    if (c.contains("duplicated")) read_factors(c.at("duplicated"), cfg.cost.duplicated, w + ".duplicated");
    if (c.contains("sequential")) read_factors(c.at("sequential"), cfg.cost.sequential, w + ".sequential");
  }
  if (cfg.trials < 1 || cfg.seeds < 1 || cfg.trials_per_seed < 1 || cfg.repeats < 1 || cfg.adc_seeds < 1 ||
      cfg.doa_trials < 1 || cfg.zero_crossing_seeds < 1) {
    throw ConfigError(where + ": trial and seed counts must be >= 1");
  }
  if (cfg.unit < 0 || cfg.unit >= kUnits) throw ConfigError(where + ".unit must be in [0, 7]");
  if (cfg.sigma_list.empty()) throw ConfigError(where + ".sigma_list must not be empty");
  for (double s : cfg.sigma_list) {
    if (!(s >= 0.0)) throw ConfigError(where + ".sigma_list entries must be >= 0");
  }
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError(where + ".format: expected csv or json");
  }
  try {
    cfg.doa = doa::normalized(cfg.doa);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace ccim

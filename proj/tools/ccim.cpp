// Experiment runner for the complex CIM macro simulator.
//
// Exit codes: 0 success, 1 malformed configuration or arguments,
// 2 selftest failure, 3 runtime error (I/O and similar).

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccim/config.hpp"
#include "ccim/costmodel.hpp"
#include "ccim/doaapp.hpp"
#include "ccim/metrology.hpp"
#include "ccim/output.hpp"
#include "ccim/selftest.hpp"

namespace {

using nlohmann::json;
using namespace ccim;

constexpr int kExitConfig = 1;
constexpr int kExitSelftest = 2;
constexpr int kExitRuntime = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<double> sigma_u;
  std::optional<std::uint64_t> mismatch_seed;
  bool ideal = false;
  std::string out;
  std::string format;
  std::string summary;
  std::vector<double> sigma_list;
  std::optional<int> seeds;
  std::optional<int> unit;
  std::optional<int> repeats;
  std::optional<int> lsb_units;
  std::optional<double> snr_db;
  std::optional<double> angle;
  std::string weights;
  std::vector<std::string> input;
  std::string rows;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration (flags override it)");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--out", f.out, "output file (default: stdout)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--summary", f.summary, "also write the JSON summary here (csv mode)");
}

void add_macro(CLI::App* sub, Flags& f) {
  sub->add_option("--sigma-u", f.sigma_u, "unit-capacitor relative mismatch (selects mismatch mode)");
  sub->add_option("--mismatch-seed", f.mismatch_seed, "mismatch instance seed (selects mismatch mode)");
  sub->add_flag("--ideal", f.ideal, "force ideal mode");
}

RunConfig effective_config(const Flags& f, const std::string& command) {
  RunConfig cfg = f.config.empty() ? run_config_from_json(json::object()) : load_run_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) {
    if (command == "mc-mismatch") cfg.trials_per_seed = *f.trials;
    else if (command == "doa") cfg.doa_trials = static_cast<int>(*f.trials);
    else cfg.trials = *f.trials;
  }
  if (f.sigma_u) {
    if (!(*f.sigma_u >= 0.0)) throw ConfigError("--sigma-u must be >= 0");
    cfg.macro.analog.sigma_u = *f.sigma_u;
    if (!cfg.macro.mismatch_seed) cfg.macro.mismatch_seed = cfg.seed;
  }
  if (f.mismatch_seed) cfg.macro.mismatch_seed = *f.mismatch_seed;
  if (f.ideal) cfg.macro.mismatch_seed.reset();
  if (!f.sigma_list.empty()) cfg.sigma_list = f.sigma_list;
  if (f.seeds) {
    if (command == "adc-char") cfg.adc_seeds = *f.seeds;
    else if (command == "xfer") cfg.zero_crossing_seeds = *f.seeds;
    else cfg.seeds = *f.seeds;
  }
  if (f.unit) cfg.unit = *f.unit;
  if (f.repeats) cfg.repeats = *f.repeats;
  if (f.lsb_units) cfg.macro.cdac_lsb_units = *f.lsb_units;
  if (f.snr_db) cfg.doa.snr_db = *f.snr_db;
  if (f.angle) cfg.doa.source_angle_deg = *f.angle;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.format.empty()) cfg.format = f.format;
  // Re-validate the merged view.
  return run_config_from_json(to_json(cfg));
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    output::write_atomic(cfg.out, text);
  }
}

json summary(const std::string& command, const RunConfig& cfg, json result) {
  return {{"schema_version", output::kSchemaVersion},
          {"command", command},
          {"config", to_json(cfg)},
          {"result", std::move(result)}};
}

// JSON by default for summaries, CSV by default for curves.
void publish(const std::string& command, const RunConfig& cfg, const Flags& f, const json& result,
             const std::string& csv, bool curve) {
  const std::string fmt = cfg.format.empty() ? (curve ? "csv" : "json") : cfg.format;
  const std::string doc = summary(command, cfg, result).dump(2) + "\n";
  if (fmt == "json") {
    emit(cfg, doc);
  } else {
    std::cerr << "config " << to_json(cfg).dump() << "\n";
    emit(cfg, csv);
    if (!f.summary.empty()) output::write_atomic(f.summary, doc);
  }
}

int run_rms(const RunConfig& cfg, const Flags& f) {
  const auto rep = metrology::rms_error(cfg.macro, cfg.trials, cfg.seed);
  publish("rms", cfg, f, output::to_json(rep), output::to_csv(rep), false);
  return 0;
}

int run_mc(const RunConfig& cfg, const Flags& f) {
  const auto curve = metrology::mismatch_sweep(cfg.macro, cfg.sigma_list, cfg.seeds, cfg.trials_per_seed, cfg.seed);
  publish("mc-mismatch", cfg, f, output::to_json(curve), output::to_csv(curve), true);
  return 0;
}

int run_xfer(const RunConfig& cfg, const Flags& f) {
  metrology::SweepOptions opts;
  opts.unit = cfg.unit;
  opts.repeats = cfg.repeats;
  opts.noise_seed = cfg.seed;
  const Macro macro(cfg.macro);
  const auto sweep = metrology::transfer_sweep(macro, opts);
  const auto zc = metrology::zero_crossing_inl(cfg.macro, cfg.zero_crossing_seeds, cfg.seed, opts);
  json result = output::to_json(sweep);
  result["zero_crossing"] = output::to_json(zc);
  publish("xfer", cfg, f, result, output::to_csv(sweep), true);
  return 0;
}

int run_adc(const RunConfig& cfg, const Flags& f) {
  const auto ch = metrology::adc_characterization(cfg.macro.effective_cdac_sigma(), cfg.macro.cdac_lsb_units,
                                                  cfg.adc_seeds, cfg.seed, cfg.macro.adc);
  publish("adc-char", cfg, f, output::to_json(ch), output::to_csv(ch), false);
  return 0;
}

int run_doa(const RunConfig& cfg, const Flags& f) {
  doa::DoaScenario scenario = cfg.doa;
  scenario.seed = cfg.seed;
  MacroConfig ideal_cfg = cfg.macro;
  ideal_cfg.mismatch_seed.reset();
  const doa::MacroEngine ideal(ideal_cfg, scenario.angle_grid, "macro_ideal");
  std::optional<doa::MacroEngine> mismatched;
  std::vector<const doa::Engine*> engines{&ideal};
  if (!cfg.macro.ideal()) {
    mismatched.emplace(cfg.macro, scenario.angle_grid, "macro_mismatch");
    engines.push_back(&*mismatched);
  }
  const auto rep = doa::rmse_experiment(scenario, cfg.doa_trials, engines);
  publish("doa", cfg, f, output::to_json(rep), output::to_csv(rep), false);
  return 0;
}

int run_cost(const RunConfig& cfg, const Flags& f) {
  const auto table = cost::evaluate_architectures(cfg.cost);
  const auto red = cost::reduction_report(table);
  publish("cost", cfg, f, output::to_json(table, red), output::to_csv(table, red), false);
  return 0;
}

int cmd_selftest(const RunConfig& cfg) {
  const auto checks = ccim::run_selftest(cfg.seed);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    ok = ok && c.passed;
  }
  return ok ? 0 : kExitSelftest;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int run_exec(const RunConfig& cfg, const Flags& f) {
  if (f.weights.empty()) throw ConfigError("exec: --weights is required");
  const WeightMemory mem = load_weight_image(f.weights, image_format_for(f.weights));
  ComplexVector input{};
  const auto& elems = f.input;
  if (elems.size() != kVectorLength) throw ConfigError("exec: --input needs 8 're,im' elements");
  for (int k = 0; k < kVectorLength; ++k) {
    const auto ri = split(elems[k], ',');
    if (ri.size() != 2) throw ConfigError("exec: malformed input element '" + elems[k] + "'");
    try {
      input[k] = complex_encode(std::stoi(ri[0]), std::stoi(ri[1]));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("exec: bad input element: ") + e.what());
    }
  }
  RowSelect rows{};
  if (!f.rows.empty()) {
    const auto r = split(f.rows, ',');
    if (r.size() != kUnits) throw ConfigError("exec: --rows needs 8 comma-separated indices");
    for (int u = 0; u < kUnits; ++u) rows[u] = std::stoi(r[u]);
  }
  for (int r : rows) {
    if (r < 0 || r >= kRows) throw ConfigError("exec: row index out of range");
  }
  const Macro macro(cfg.macro);
  const MacroOutput out = macro.execute(mem, input, rows);
  json units = json::array();
  std::ostringstream csv;
  csv << "unit,row,re_code,im_code\n";
  for (int u = 0; u < kUnits; ++u) {
    units.push_back({{"unit", u}, {"row", rows[u]}, {"re_code", out.units[u].re_code}, {"im_code", out.units[u].im_code}});
    csv << u << ',' << rows[u] << ',' << out.units[u].re_code << ',' << out.units[u].im_code << '\n';
  }
  publish("exec", cfg, f, json{{"units", units}}, csv.str(), false);
  return 0;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral simulator for a hybrid digital/analog complex-number CIM macro"};
  app.require_subcommand(1);
  Flags f;

  auto* xfer = app.add_subcommand("xfer", "transfer sweep, INL and zero-crossing report");
  auto* rms = app.add_subcommand("rms", "uniform-input RMS error");
  auto* mc = app.add_subcommand("mc-mismatch", "Monte Carlo RMS error versus capacitor mismatch");
  auto* adcc = app.add_subcommand("adc-char", "SAR ADC DNL/INL statistics");
  auto* doa = app.add_subcommand("doa", "beamscan DOA with float and macro engines");
  auto* cost = app.add_subcommand("cost", "relative area/latency/power accounting");
  auto* self = app.add_subcommand("selftest", "oracle-equivalence checks");
  auto* exec = app.add_subcommand("exec", "one macro execute from a weight image");

  for (auto* sub : {xfer, rms, mc, adcc, doa, cost, self, exec}) add_common(sub, f);
  for (auto* sub : {xfer, rms, mc, adcc, doa, exec}) add_macro(sub, f);
  for (auto* sub : {rms, mc, doa}) sub->add_option("--trials", f.trials, "trial count (per seed for mc-mismatch)");
  mc->add_option("--sigma-list", f.sigma_list, "comma-separated sigma_u values")->delimiter(',');
  for (auto* sub : {mc, adcc, xfer}) sub->add_option("--seeds", f.seeds, "number of mismatch seeds");
  xfer->add_option("--unit", f.unit, "unit to sweep");
  xfer->add_option("--repeats", f.repeats, "conversions averaged per point (noisy comparator)");
  adcc->add_option("--lsb-units", f.lsb_units, "unit capacitors in the CDAC LSB");
  doa->add_option("--snr", f.snr_db, "SNR in dB");
  doa->add_option("--angle", f.angle, "source angle in degrees");
  exec->add_option("--weights", f.weights, "weight image (.hex/.txt text, otherwise binary)");
  exec->add_option("--input", f.input, "8 elements, each 're,im'")->expected(kVectorLength);
  exec->add_option("--rows", f.rows, "8 comma-separated row selects (default all 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::cerr << "ccim " << command << " started " << timestamp() << "\n";
  try {
    const RunConfig cfg = effective_config(f, command);
    if (command == "rms") return run_rms(cfg, f);
    if (command == "mc-mismatch") return run_mc(cfg, f);
    if (command == "xfer") return run_xfer(cfg, f);
    if (command == "adc-char") return run_adc(cfg, f);
    if (command == "doa") return run_doa(cfg, f);
    if (command == "cost") return run_cost(cfg, f);
    if (command == "selftest") return cmd_selftest(cfg);
    if (command == "exec") return run_exec(cfg, f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

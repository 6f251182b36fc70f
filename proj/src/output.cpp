#include "ccim/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccim::output {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json to_json(const metrology::RmsReport& r) {
  return {{"trials", r.trials},         {"samples", r.samples},
          {"seed", r.seed},             {"sum_sq_error", r.sum_sq_error},
          {"max_abs_error", r.max_abs_error}, {"rms_lsb", r.rms_lsb},
          {"rms_pct_fs", r.rms_pct_fs}, {"rms_pct_range", r.rms_pct_range}};
}

json to_json(const metrology::Distribution& d) {
  return {{"median", d.median}, {"p05", d.p05}, {"p95", d.p95}, {"mean", d.mean}, {"stderr_median", d.stderr_median}};
}

json to_json(const metrology::MismatchCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"sigma_u", p.sigma_u}, {"rms_pct_fs", to_json(p.rms)}, {"per_seed", p.per_seed}});
  }
  return {{"seeds_per_point", c.seeds_per_point},
          {"trials_per_seed", c.trials_per_seed},
          {"seed", c.seed},
          {"medians_non_decreasing_2se", metrology::medians_non_decreasing(c, 2.0)},
          {"points", pts}};
}

json to_json(const metrology::SweepResult& s) {
  json pts = json::array();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    pts.push_back({{"x", p.x},
                   {"mean_code", p.mean_code},
                   {"ideal_code", p.ideal_code},
                   {"true_value", p.true_value},
                   {"analog_value", p.analog_value},
                   {"inl", s.inl[i]},
                   {"inl_endpoint", s.inl_endpoint[i]},
                   {"error_vs_ideal", s.error_vs_ideal[i]},
                   {"analog_inl", s.analog_inl[i]}});
  }
  return {{"gain", s.gain},
          {"offset", s.offset},
          {"max_abs_inl", s.max_abs_inl},
          {"max_abs_inl_endpoint", s.max_abs_inl_endpoint},
          {"max_abs_error_vs_ideal", s.max_abs_error_vs_ideal},
          {"max_abs_analog_inl", s.max_abs_analog_inl},
          {"points", pts}};
}

json to_json(const metrology::ZeroCrossingReport& z) {
  json entries = json::array();
  for (const auto& e : z.entries) {
    entries.push_back({{"mismatch_seed", e.mismatch_seed ? json(*e.mismatch_seed) : json(nullptr)},
                       {"analog_argmax", e.analog_argmax ? json(*e.analog_argmax) : json(nullptr)},
                       {"code_argmax", e.code_argmax},
                       {"max_abs_analog_inl", e.max_abs_analog_inl},
                       {"max_abs_inl", e.max_abs_inl}});
  }
  return {{"window", z.window},
          {"runs", z.entries.size()},
          {"analog_defined", z.analog_defined},
          {"analog_near_zero", z.analog_near_zero},
          {"code_near_zero", z.code_near_zero},
          {"analog_fraction", z.analog_fraction},
          {"code_fraction", z.code_fraction},
          {"entries", entries}};
}

json to_json(const metrology::AdcCharacterization& a) {
  return {{"sigma_u", a.sigma_u},
          {"lsb_units", a.lsb_units},
          {"seeds", a.dnl_rms.size()},
          {"dnl_rms", to_json(a.dnl_rms_dist)},
          {"dnl_max", to_json(a.dnl_max_dist)},
          {"inl_max", to_json(a.inl_max_dist)},
          {"worst_code_dnl_sigma", a.worst_code_dnl_sigma},
          {"non_monotonic", a.non_monotonic}};
}

json to_json(const cost::CostTable& t, const std::array<cost::Reduction, 3>& red) {
  json table = json::object();
  for (cost::Architecture a : cost::kArchitectures) {
    const auto& tot = t.get(a);
    table[cost::to_string(a)] = {{"area", tot.area}, {"latency", tot.latency}, {"power", tot.power}};
  }
  json reductions = json::object();
  for (const auto& r : red) {
    reductions[cost::to_string(r.metric)] = {
        {"best_baseline", cost::to_string(r.best_baseline)},
        {"reduction", r.reduction ? json(*r.reduction) : json(nullptr)}};
  }
  return {{"table", table}, {"reductions", reductions}};
}

json to_json(const doa::RmseReport& r) {
  json stats = json::array();
  for (const auto& s : r.stats) {
    stats.push_back({{"engine", s.name},
                     {"rmse_vs_float_deg", s.rmse_vs_float_deg},
                     {"rmse_vs_truth_deg", s.rmse_vs_truth_deg},
                     {"rmse_vs_float_pct_fov", s.rmse_vs_float_pct_fov},
                     {"rmse_vs_truth_pct_fov", s.rmse_vs_truth_pct_fov},
                     {"match_fraction", s.match_fraction},
                     {"within_step_fraction", s.within_step_fraction},
                     {"degenerate", s.degenerate}});
  }
  return {{"trials", r.trials}, {"fov_deg", r.fov_deg}, {"grid_step_deg", r.grid_step_deg},
          {"engines", r.engines}, {"stats", stats}};
}

std::string to_csv(const metrology::RmsReport& r) {
  std::ostringstream os;
  os << "trials,samples,seed,rms_lsb,rms_pct_fs,rms_pct_range,max_abs_error\n"
     << r.trials << ',' << r.samples << ',' << r.seed << ',' << format_double(r.rms_lsb) << ','
     << format_double(r.rms_pct_fs) << ',' << format_double(r.rms_pct_range) << ',' << r.max_abs_error << '\n';
  return os.str();
}

std::string to_csv(const metrology::MismatchCurve& c) {
  std::ostringstream os;
  os << "sigma,median,p05,p95\n";
  for (const auto& p : c.points) {
    os << format_double(p.sigma_u) << ',' << format_double(p.rms.median) << ',' << format_double(p.rms.p05) << ','
       << format_double(p.rms.p95) << '\n';
  }
  return os.str();
}

std::string to_csv(const metrology::SweepResult& s) {
  std::ostringstream os;
  os << "x,mean_code,ideal_code,true_value,analog_value,inl,inl_endpoint,error_vs_ideal,analog_inl\n";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    os << p.x << ',' << format_double(p.mean_code) << ',' << p.ideal_code << ',' << format_double(p.true_value)
       << ',' << format_double(p.analog_value) << ',' << format_double(s.inl[i]) << ','
       << format_double(s.inl_endpoint[i]) << ',' << format_double(s.error_vs_ideal[i]) << ','
       << format_double(s.analog_inl[i]) << '\n';
  }
  return os.str();
}

std::string to_csv(const metrology::AdcCharacterization& a) {
  std::ostringstream os;
  os << "seed_index,dnl_rms,dnl_max,inl_max\n";
  for (std::size_t i = 0; i < a.dnl_rms.size(); ++i) {
    os << i << ',' << format_double(a.dnl_rms[i]) << ',' << format_double(a.dnl_max[i]) << ','
       << format_double(a.inl_max[i]) << '\n';
  }
  return os.str();
}

std::string to_csv(const cost::CostTable& t, const std::array<cost::Reduction, 3>& red) {
  std::ostringstream os;
  os << "row,area,latency,power\n";
  for (cost::Architecture a : cost::kArchitectures) {
    const auto& tot = t.get(a);
    os << cost::to_string(a) << ',' << format_double(tot.area) << ',' << format_double(tot.latency) << ','
       << format_double(tot.power) << '\n';
  }
  os << "reduction_pct";
  for (const auto& r : red) {
    os << ',';
    if (r.reduction) os << format_double(100.0 * *r.reduction);
  }
  os << '\n';
  return os.str();
}

std::string to_csv(const doa::RmseReport& r) {
  std::ostringstream os;
  os << "trial,true_angle";
  for (const auto& e : r.engines) os << ',' << e;
  os << ",input_scale\n";
  for (const auto& row : r.rows) {
    os << row.trial << ',' << format_double(row.true_angle);
    for (double e : row.estimates) os << ',' << format_double(e);
    os << ',' << format_double(row.input_scale) << '\n';
  }
  return os.str();
}

}  // namespace ccim::output
